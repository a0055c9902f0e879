//! JSON annotation files.
//!
//! ```json
//! {"images": [{"id": "img1", "width": 800, "height": 600,
//!              "objects": [{"id": "cup", "label": "cup",
//!                           "polygon": [[10, 20], [50, 20], [30, 60]]}]}]}
//! ```

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use gazecenter_core::{Dims, ImageAnnotation, ObjectAnnotation, Point, Polygon};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnnotationFile {
    images: Vec<ImageRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ImageRecord {
    id: String,
    width: usize,
    height: usize,
    #[serde(default)]
    objects: Vec<ObjectRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObjectRecord {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    polygon: Vec<[f64; 2]>,
}

pub fn load_annotations(path: impl AsRef<Path>) -> Result<Vec<ImageAnnotation>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_annotations(&text, path)
}

/// Parses and validates annotation JSON; `origin` is used in error messages.
pub fn parse_annotations(text: &str, origin: &Path) -> Result<Vec<ImageAnnotation>> {
    let file: AnnotationFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: origin.to_path_buf(),
        line: e.line(),
        field: format!("column {}", e.column()),
        message: e.to_string(),
    })?;

    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(file.images.len());
    for img in file.images {
        if !seen.insert(img.id.clone()) {
            return Err(Error::DuplicateImageId(img.id));
        }
        if img.width == 0 || img.height == 0 {
            return Err(Error::Parse {
                path: origin.to_path_buf(),
                line: 0,
                field: format!("images[{}].width/height", img.id),
                message: "dimensions must be positive".into(),
            });
        }
        let mut object_ids = HashSet::new();
        let mut objects = Vec::with_capacity(img.objects.len());
        for obj in img.objects {
            if !object_ids.insert(obj.id.clone()) {
                return Err(Error::DuplicateObjectId { image_id: img.id, object_id: obj.id });
            }
            let vertices = obj.polygon.iter().map(|&[x, y]| Point::new(x, y)).collect();
            let polygon = Polygon::new(vertices).map_err(|source| Error::InvalidPolygon {
                image_id: img.id.clone(),
                object_id: obj.id.clone(),
                source,
            })?;
            objects.push(ObjectAnnotation { object_id: obj.id, polygon, label: obj.label });
        }
        out.push(ImageAnnotation { image_id: img.id, dims: Dims::new(img.width, img.height), objects });
    }
    Ok(out)
}

pub fn annotations_to_json(images: &[ImageAnnotation]) -> String {
    let file = AnnotationFile {
        images: images
            .iter()
            .map(|img| ImageRecord {
                id: img.image_id.clone(),
                width: img.dims.width,
                height: img.dims.height,
                objects: img
                    .objects
                    .iter()
                    .map(|o| ObjectRecord {
                        id: o.object_id.clone(),
                        label: o.label.clone(),
                        polygon: o.polygon.vertices().iter().map(|p| [p.x, p.y]).collect(),
                    })
                    .collect(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("annotation records always serialize");
    s.push('\n');
    s
}

pub fn save_annotations(path: impl AsRef<Path>, images: &[ImageAnnotation]) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, annotations_to_json(images)).map_err(|e| Error::io(path, e))
}
