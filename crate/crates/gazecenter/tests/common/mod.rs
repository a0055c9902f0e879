#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gazecenter::mapio::write_map;
use gazecenter_core::{DenseGrid, Dims};

pub const W: usize = 48;
pub const H: usize = 36;

pub fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gazecenter"));
    cmd.env("GAZECENTER_THREADS", "2").env("RUST_LOG", "warn");
    cmd
}

pub fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

/// Two annotated images with one saliency map each and a handful of
/// fixations, plus a third image with no objects.
pub fn dataset(dir: &Path) -> PathBuf {
    let annotations = r#"{
  "images": [
    {"id": "beach", "width": 48, "height": 36, "objects": [
      {"id": "ball", "label": "ball", "polygon": [[4, 4], [20, 4], [20, 18], [4, 18]]},
      {"id": "dog", "polygon": [[26, 10], [44, 12], [40, 32], [28, 30]]}
    ]},
    {"id": "street", "width": 48, "height": 36, "objects": [
      {"id": "car", "label": "car", "polygon": [[10, 8], [38, 8], [38, 28], [10, 28]]}
    ]},
    {"id": "sky", "width": 48, "height": 36, "objects": []}
  ]
}
"#;
    std::fs::write(dir.join("a.json"), annotations).unwrap();
    let mut fix = String::from("image_id,observer_id,fixation_index,x,y,duration_ms\n");
    let pts: [(&str, f64, f64); 14] = [
        ("beach", 12.2, 11.0),
        ("beach", 11.5, 10.4),
        ("beach", 6.0, 5.5),
        ("beach", 35.0, 21.0),
        ("beach", 34.1, 20.2),
        ("beach", 2.0, 33.0),
        ("street", 24.0, 18.0),
        ("street", 23.2, 17.5),
        ("street", 25.9, 19.1),
        ("street", 12.0, 27.0),
        ("street", 45.0, 3.0),
        ("sky", 24.0, 5.0),
        ("sky", 30.0, 7.0),
        ("sky", 10.0, 4.0),
    ];
    for (i, (id, x, y)) in pts.iter().enumerate() {
        fix.push_str(&format!("{id},o{},{},{x},{y},{}\n", i % 2, i + 1, 150 + 10 * i));
    }
    std::fs::write(dir.join("f.csv"), fix).unwrap();
    let sal = dir.join("s");
    std::fs::create_dir_all(&sal).unwrap();
    for (n, id) in ["beach", "street", "sky"].iter().enumerate() {
        let g = DenseGrid::from_fn(Dims::new(W, H), |c, r| {
            let (x, y) = (c as f64 / W as f64, r as f64 / H as f64);
            1.0 + (x * (3.0 + n as f64)).sin() * (y * 5.0).cos() + 0.5 * x
        })
        .normalized()
        .unwrap();
        write_map(sal.join(format!("{id}.smap")), &g).unwrap();
    }
    dir.to_path_buf()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}
