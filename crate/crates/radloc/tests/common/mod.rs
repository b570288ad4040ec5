//! Synthetic fixtures written to temporary directories.
#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use radloc_core::eval::LOCALIZATION_CLASSES;
use radloc_core::image::Heatmap;
use radloc::io::write_heatmap_raw;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn radloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radloc"))
        .args(args)
        .output()
        .expect("radloc binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

pub fn write_png_u8(path: &Path, w: usize, h: usize, px: Vec<u8>) {
    image::GrayImage::from_raw(w as u32, h as u32, px).unwrap().save(path).unwrap();
}

pub fn write_png_u16(path: &Path, w: usize, h: usize, px: Vec<u16>) {
    image::ImageBuffer::<image::Luma<u16>, _>::from_raw(w as u32, h as u32, px)
        .unwrap()
        .save(path)
        .unwrap();
}

pub fn write_pgm(path: &Path, w: usize, h: usize, px: &[u8]) {
    let mut bytes = format!("P5\n{w} {h}\n255\n").into_bytes();
    bytes.extend_from_slice(px);
    fs::write(path, bytes).unwrap();
}

/// Isotropic Gaussian bump on a zero background.
pub fn gaussian_heatmap(w: usize, h: usize, cx: f64, cy: f64, sigma: f64, class_id: usize) -> Heatmap {
    let v = (0..w * h)
        .map(|i| {
            let (x, y) = ((i % w) as f64, (i / w) as f64);
            (-((x - cx).powi(2) + (y - cy).powi(2)) / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    Heatmap::new(w, h, v, class_id).unwrap()
}

pub fn rect_mask(w: usize, h: usize, x0: usize, y0: usize, x1: usize, y1: usize) -> Vec<u8> {
    (0..w * h)
        .map(|i| {
            let (x, y) = (i % w, i / w);
            if (x0..x1).contains(&x) && (y0..y1).contains(&y) {
                255
            } else {
                0
            }
        })
        .collect()
}

/// Manifest of `n` entries over 24x24 images mixing 16-bit PNG, 8-bit PNG
/// and PGM inputs, masks, raw heatmaps and PNG heatmaps.
pub fn build_fixture(dir: &Path, n: usize) -> PathBuf {
    let (w, h) = (24, 24);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut lines = String::new();
    for i in 0..n {
        let image_name = match i % 3 {
            0 => {
                let px = (0..w * h).map(|_| rng.gen_range(0..4096u16)).collect();
                let name = format!("img{i}.png");
                write_png_u16(&dir.join(&name), w, h, px);
                name
            }
            1 => {
                let px = (0..w * h).map(|_| rng.gen_range(0..=255u8)).collect();
                let name = format!("img{i}.png");
                write_png_u8(&dir.join(&name), w, h, px);
                name
            }
            _ => {
                let px: Vec<u8> = (0..w * h).map(|_| rng.gen_range(0..=255u8)).collect();
                let name = format!("img{i}.pgm");
                write_pgm(&dir.join(&name), w, h, &px);
                name
            }
        };
        let mut entry = format!("{{\"image_path\":\"{image_name}\"");
        if i % 2 == 0 {
            let (x0, y0) = (rng.gen_range(0..10), rng.gen_range(0..10));
            let mask = rect_mask(w, h, x0, y0, x0 + rng.gen_range(3..12), y0 + rng.gen_range(3..12));
            let name = format!("mask{i}.png");
            write_png_u8(&dir.join(&name), w, h, mask);
            entry.push_str(&format!(",\"mask_path\":\"{name}\""));
        }
        if i % 2 == 1 || i % 5 == 0 {
            let heat = gaussian_heatmap(w, h, rng.gen_range(4.0..20.0), rng.gen_range(4.0..20.0), rng.gen_range(1.5..4.0), 4);
            let name = if i % 7 == 3 {
                let px = radloc_core::image::normalize_heatmap(&heat).pixels().iter().map(|&v| v as u8).collect();
                let name = format!("heat{i}.png");
                write_png_u8(&dir.join(&name), w, h, px);
                name
            } else {
                let name = format!("heat{i}.f32");
                write_heatmap_raw(&dir.join(&name), &heat).unwrap();
                name
            };
            entry.push_str(&format!(",\"heatmap_path\":\"{name}\",\"class_id\":{}", LOCALIZATION_CLASSES[i % 8]));
        }
        entry.push_str("}\n");
        lines.push_str(&entry);
    }
    let path = dir.join("manifest.jsonl");
    fs::write(&path, lines).unwrap();
    path
}

/// Cases where every prediction equals its ground truth, four per
/// box-annotated class.
pub fn perfect_cases(dir: &Path) -> PathBuf {
    let mut lines = String::new();
    for (k, &c) in LOCALIZATION_CLASSES.iter().enumerate() {
        for j in 0..4 {
            let (x, y, w, h) = (k * 3 + j, j * 5, 10 + k, 7 + j);
            lines.push_str(&format!(
                "{{\"image_id\":\"i{k}_{j}\",\"class_id\":{c},\"gt\":{{\"x\":{x},\"y\":{y},\"w\":{w},\"h\":{h}}},\"preds\":[{{\"x\":{x},\"y\":{y},\"w\":{w},\"h\":{h}}}]}}\n"
            ));
        }
    }
    let path = dir.join("cases.jsonl");
    fs::write(&path, lines).unwrap();
    path
}

/// Cases whose single prediction is the ground truth shifted right by a
/// random amount, so accuracy varies across thresholds.
pub fn shifted_cases(dir: &Path, n: usize, seed: u64) -> PathBuf {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines = String::new();
    for i in 0..n {
        let c = LOCALIZATION_CLASSES[i % 8];
        let (x, y, w, h) = (rng.gen_range(0..50), rng.gen_range(0..50), rng.gen_range(5..30), rng.gen_range(5..30));
        let dx = rng.gen_range(0..w);
        lines.push_str(&format!(
            "{{\"image_id\":\"c{i}\",\"class_id\":{c},\"gt\":{{\"x\":{x},\"y\":{y},\"w\":{w},\"h\":{h}}},\"preds\":[{{\"x\":{},\"y\":{y},\"w\":{w},\"h\":{h}}}]}}\n",
            x + dx
        ));
    }
    let path = dir.join(format!("shifted{seed}.jsonl"));
    fs::write(&path, lines).unwrap();
    path
}
