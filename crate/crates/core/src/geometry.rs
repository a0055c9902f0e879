//! Object regions: polygon rasterization, center of mass and the
//! equal-area ring partition grown outward from the center of mass.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::Dims;

/// Default number of rings; each ring holds a tenth of the object area.
pub const DEFAULT_RINGS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Self { x, y }
    }
}

/// Closed polygon with at least three finite vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::FewerThan3Vertices { got: vertices.len() });
        }
        if !vertices.iter().all(Point::is_finite) {
            return Err(Error::NonFiniteVertex);
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Axis-aligned bounds as `(min_x, min_y, max_x, max_y)`.
    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        self.vertices
            .iter()
            .fold((f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY), |(x0, y0, x1, y1), p| {
                (x0.min(p.x), y0.min(p.y), x1.max(p.x), y1.max(p.y))
            })
    }
}

/// How an annotation is turned into a pixel region.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum RegionMode {
    /// Pixels whose centers are inside the polygon (even-odd rule).
    #[default]
    Polygon,
    /// Pixels whose centers are inside the polygon's bounding box.
    BBox,
}

/// Non-empty set of in-bounds pixels, kept in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PixelSet {
    dims: Dims,
    indices: Vec<usize>,
}

impl PixelSet {
    /// Builds a set from `(col, row)` pairs. Duplicates are merged; pixels
    /// outside `dims` are dropped.
    pub fn from_pixels(dims: Dims, pixels: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut indices: Vec<usize> = pixels
            .into_iter()
            .filter(|&(c, r)| c < dims.width && r < dims.height)
            .map(|(c, r)| dims.index(c, r))
            .collect();
        indices.sort_unstable();
        indices.dedup();
        if indices.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(Self { dims, indices })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Row-major linear indices.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.dims.width;
        self.indices.iter().map(move |&i| (i % w, i / w))
    }

    pub fn contains(&self, col: usize, row: usize) -> bool {
        col < self.dims.width
            && row < self.dims.height
            && self.indices.binary_search(&self.dims.index(col, row)).is_ok()
    }

    /// Whether the pixel containing the real-valued point belongs to the set.
    pub fn contains_point(&self, p: Point) -> bool {
        self.dims.pixel_of(p.x, p.y).is_some_and(|(c, r)| self.contains(c, r))
    }
}

/// Rasterizes a polygon onto a `dims` image.
pub fn rasterize_polygon(polygon: &Polygon, dims: Dims, mode: RegionMode) -> Result<PixelSet> {
    if dims.is_empty() {
        return Err(Error::ZeroDims);
    }
    let (x0, y0, x1, y1) = polygon.bounds();
    let (w, h) = (dims.width as f64, dims.height as f64);
    if x1 < 0.0 || y1 < 0.0 || x0 > w || y0 > h {
        return Err(Error::OutOfBounds);
    }

    let mut indices = Vec::new();
    let row_lo = libm::floor(y0 - 0.5).max(0.0) as usize;
    let row_hi = (libm::ceil(y1).max(0.0) as usize).min(dims.height - 1);
    let mut crossings: Vec<f64> = Vec::new();
    for row in row_lo..=row_hi {
        let cy = row as f64 + 0.5;
        match mode {
            RegionMode::BBox => {
                if cy >= y0 && cy <= y1 {
                    push_span(&mut indices, dims, row, |cx| cx >= x0, |cx| cx <= x1, x0);
                }
            }
            RegionMode::Polygon => {
                scanline_crossings(polygon.vertices(), cy, &mut crossings);
                for pair in crossings.chunks_exact(2) {
                    let (a, b) = (pair[0], pair[1]);
                    push_span(&mut indices, dims, row, |cx| cx >= a, |cx| cx < b, a);
                }
            }
        }
    }
    if indices.is_empty() {
        return Err(Error::EmptyRaster);
    }
    Ok(PixelSet { dims, indices })
}

/// Sorted x coordinates where the horizontal line `y` crosses polygon edges.
///
/// An edge counts when exactly one endpoint lies strictly above `y`, which
/// makes vertices on the line resolve consistently (half-open rule).
fn scanline_crossings(vertices: &[Point], y: f64, out: &mut Vec<f64>) {
    out.clear();
    let n = vertices.len();
    let mut j = n - 1;
    for i in 0..n {
        let (pi, pj) = (vertices[i], vertices[j]);
        if (pi.y > y) != (pj.y > y) {
            out.push((pj.x - pi.x) * (y - pi.y) / (pj.y - pi.y) + pi.x);
        }
        j = i;
    }
    out.sort_by(f64::total_cmp);
}

fn push_span(
    out: &mut Vec<usize>,
    dims: Dims,
    row: usize,
    starts: impl Fn(f64) -> bool,
    continues: impl Fn(f64) -> bool,
    from_x: f64,
) {
    let mut col = libm::floor(from_x - 0.5).max(0.0) as usize;
    while col < dims.width && !starts(col as f64 + 0.5) {
        col += 1;
    }
    while col < dims.width && continues(col as f64 + 0.5) {
        out.push(dims.index(col, row));
        col += 1;
    }
}

/// Mean pixel column and mean pixel row of the set.
pub fn center_of_mass(ps: &PixelSet) -> Result<Point> {
    if ps.is_empty() {
        return Err(Error::EmptySet);
    }
    let (sx, sy) = ps.iter().fold((0.0, 0.0), |(sx, sy), (c, r)| (sx + c as f64, sy + r as f64));
    let n = ps.len() as f64;
    Ok(Point::new(sx / n, sy / n))
}

/// Concentric equal-area rings of an object, numbered 1 (innermost) to k.
#[derive(Clone, Debug, PartialEq)]
pub struct RingPartition {
    center: Point,
    k: usize,
    pixels: PixelSet,
    /// Ring (1-based) of each pixel, parallel to `pixels.indices()`.
    ring_of: Vec<u32>,
    radii: Vec<f64>,
    counts: Vec<usize>,
}

/// Splits the pixels into `k` rings by distance rank from `center`.
///
/// Pixels are ordered by Euclidean distance (ties by row-major position)
/// and the pixel with 1-based rank `r` goes to ring `ceil(r * k / N)`, so
/// every ring holds either `floor(N/k)` or `ceil(N/k)` pixels.
pub fn ring_partition(ps: &PixelSet, center: Point, k: usize) -> Result<RingPartition> {
    if ps.is_empty() {
        return Err(Error::EmptySet);
    }
    if k == 0 {
        return Err(Error::KNonPositive);
    }
    let n = ps.len();
    let dist2: Vec<f64> = ps
        .iter()
        .map(|(c, r)| {
            let dx = c as f64 - center.x;
            let dy = r as f64 - center.y;
            dx * dx + dy * dy
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    // stable: equal distances keep row-major order
    order.sort_by(|&a, &b| dist2[a].total_cmp(&dist2[b]));

    let mut ring_of = vec![0u32; n];
    let mut radii = vec![0.0f64; k];
    let mut counts = vec![0usize; k];
    for (rank0, &p) in order.iter().enumerate() {
        let ring = ((rank0 + 1) * k).div_ceil(n);
        ring_of[p] = ring as u32;
        counts[ring - 1] += 1;
        radii[ring - 1] = libm::sqrt(dist2[p]);
    }
    // rings left empty when k > N inherit the previous radius
    for i in 1..k {
        if counts[i] == 0 {
            radii[i] = radii[i - 1];
        }
    }
    Ok(RingPartition { center, k, pixels: ps.clone(), ring_of, radii, counts })
}

impl RingPartition {
    pub fn center(&self) -> Point {
        self.center
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn pixels(&self) -> &PixelSet {
        &self.pixels
    }

    pub fn dims(&self) -> Dims {
        self.pixels.dims()
    }

    /// Outer radius of each ring in pixels, innermost first.
    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Pixel count of each ring, innermost first.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// `(col, row, ring)` for every object pixel in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.pixels.iter().zip(&self.ring_of).map(|((c, r), &ring)| (c, r, ring as usize))
    }

    /// 1-based ring of a pixel, or `None` outside the object.
    pub fn ring_of_pixel(&self, col: usize, row: usize) -> Option<usize> {
        let dims = self.pixels.dims();
        if col >= dims.width || row >= dims.height {
            return None;
        }
        self.pixels.indices().binary_search(&dims.index(col, row)).ok().map(|i| self.ring_of[i] as usize)
    }

    /// Ring of the pixel containing the point.
    pub fn ring_of_point(&self, p: Point) -> Option<usize> {
        let (c, r) = self.dims().pixel_of(p.x, p.y)?;
        self.ring_of_pixel(c, r)
    }

    /// Pixels belonging to ring `ring` (1-based), row-major.
    pub fn ring_pixels(&self, ring: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.iter().filter(move |&(_, _, r)| r == ring).map(|(c, r, _)| (c, r))
    }
}
