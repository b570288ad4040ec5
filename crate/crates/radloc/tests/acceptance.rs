//! Acceptance checks, one line per criterion. Exits non-zero if any fails.

mod common;
#[path = "../../core/tests/oracles/mod.rs"]
mod oracles;

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{build_fixture, gaussian_heatmap, perfect_cases, radloc};
use oracles::{
    auc_pairwise, central_difference, glcm_oracle, gldm_oracle, glrlm_oracle, glszm_oracle, masked, ngtdm_oracle,
    nonzero, random_roi,
};
use radloc_core::attn::{gradcheck_seeded, triplet_forward, Tensor4, TripletParams};
use radloc_core::eval::{iou, roc_auc_scores};
use radloc_core::image::{generate_bboxes, BoundingBox, BoxGenConfig, TaggedBox};
use radloc_core::objective::{
    classification_loss, total_loss, total_loss_grad, FeatureProjections, LossConfig, Projection,
};
use radloc_core::radiomics::{glcm, gldm, glrlm, glszm, ngtdm, Direction, QuantizedRoi, TextureMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

fn secs(d: Duration) -> String {
    format!("{:.2} s", d.as_secs_f64())
}

fn rois(n: usize, seed: u64) -> Vec<QuantizedRoi> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_roi(&mut rng, 8, 8)).collect()
}

fn texture_oracles() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let rois = rois(1000, 101);
    for (i, q) in rois.iter().enumerate() {
        let delta = rng.gen_range(1..=2);
        let alpha = rng.gen_range(0..=2);
        for d in Direction::ALL {
            if nonzero(&glcm(q, delta, d)) != glcm_oracle(q, delta, d) {
                return Err(format!("GLCM differs on trial {i} at {} degrees", d.degrees()));
            }
            if nonzero(&glrlm(q, d)) != glrlm_oracle(q, d) {
                return Err(format!("GLRLM differs on trial {i} at {} degrees", d.degrees()));
            }
        }
        if nonzero(&glszm(q)) != glszm_oracle(q) {
            return Err(format!("GLSZM differs on trial {i}"));
        }
        let m = ngtdm(q, delta);
        let o = ngtdm_oracle(q, delta);
        if (0..o.len()).any(|l| (m.get(l, 0), m.get(l, 1)) != o[l]) {
            return Err(format!("NGTDM differs on trial {i}"));
        }
        if nonzero(&gldm(q, delta, alpha)) != gldm_oracle(q, delta, alpha) {
            return Err(format!("GLDM differs on trial {i}"));
        }
    }
    let t = start.elapsed();
    if t > Duration::from_secs(30) {
        return Err(format!("took {}", secs(t)));
    }
    Ok(format!("1000 rois x 5 builders exact, {}", secs(t)))
}

fn mass_identities() -> Outcome {
    let weighted = |m: &TextureMatrix| -> f64 {
        (0..m.rows)
            .flat_map(|i| (0..m.cols).map(move |j| (i, j)))
            .map(|(i, j)| (j + 1) as f64 * m.get(i, j))
            .sum()
    };
    let rois = rois(1000, 101);
    for (i, q) in rois.iter().enumerate() {
        let n = masked(q).len() as f64;
        if weighted(&glszm(q)) != n {
            return Err(format!("GLSZM mass differs on trial {i}"));
        }
        for d in Direction::ALL {
            if weighted(&glrlm(q, d)) != n {
                return Err(format!("GLRLM mass differs on trial {i}"));
            }
        }
        for delta in 1..=2 {
            if gldm(q, delta, 1).sum() != n {
                return Err(format!("GLDM mass differs on trial {i}"));
            }
        }
    }
    Ok("1000 rois, all exact".into())
}

fn gradcheck_instances() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(300);
    let mut worst = 0.0f64;
    for seed in 0..50u64 {
        let dims = if seed == 0 {
            [2, 4, 8, 8]
        } else {
            [rng.gen_range(1..=2), rng.gen_range(1..=4), rng.gen_range(1..=8), rng.gen_range(1..=8)]
        };
        let k = [3, 5, 7][rng.gen_range(0..3)];
        let r = gradcheck_seeded(dims, k, seed).map_err(|e| e.to_string())?;
        if r.max_rel_error.is_nan() || r.max_rel_error >= 1e-6 {
            return Err(format!("seed {seed} dims {dims:?} k {k}: {:e}", r.max_rel_error));
        }
        worst = worst.max(r.max_rel_error);
    }
    let t = start.elapsed();
    if t > Duration::from_secs(60) {
        return Err(format!("took {}", secs(t)));
    }
    Ok(format!("50 instances, worst {worst:.3e}, {}", secs(t)))
}

fn zero_weight_closed_form() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(400);
    for i in 0..100 {
        let dims = [rng.gen_range(1..=2), rng.gen_range(1..=4), rng.gen_range(1..=8), rng.gen_range(1..=8)];
        let x = Tensor4::random(dims, 1e3, &mut rng);
        let (y, _) = triplet_forward(&x, &TripletParams::zeros(7).unwrap()).map_err(|e| e.to_string())?;
        if y.data().iter().zip(x.data()).any(|(a, b)| a.to_bits() != (0.5 * b).to_bits()) {
            return Err(format!("instance {i} differs from 0.5 x"));
        }
    }
    Ok("100 inputs bitwise equal".into())
}

fn auc_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let mut worst = 0.0f64;
    for i in 0..500 {
        let n = rng.gen_range(2..=100);
        let levels = if i % 2 == 0 { rng.gen_range(1..=4) } else { 1_000_000 };
        let scores: Vec<f64> = (0..n).map(|_| f64::from(rng.gen_range(0..levels)) * 0.37).collect();
        let mut labels: Vec<u8> = (0..n).map(|_| rng.gen_range(0..=1)).collect();
        labels[0] = 0;
        labels[1] = 1;
        let a = roc_auc_scores(&scores, &labels).map_err(|e| e.to_string())?;
        let err = (a - auc_pairwise(&scores, &labels)).abs();
        if err > 1e-12 {
            return Err(format!("set {i}: error {err:e}"));
        }
        worst = worst.max(err);
    }
    Ok(format!("500 sets, 250 tie-heavy, worst {worst:e}"))
}

fn true_box(w: usize, h: usize, cx: f64, cy: f64, sigma: f64) -> BoundingBox {
    let x0 = (cx - 2.0 * sigma).ceil().max(0.0) as usize;
    let y0 = (cy - 2.0 * sigma).ceil().max(0.0) as usize;
    let x1 = ((cx + 2.0 * sigma).floor() as usize).min(w - 1);
    let y1 = ((cy + 2.0 * sigma).floor() as usize).min(h - 1);
    BoundingBox::new(x0, y0, x1 - x0 + 1, y1 - y0 + 1).unwrap()
}

fn mask_generation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(600);
    let (w, h) = (64, 64);
    let cfg = BoxGenConfig::default();
    let mut hits = 0;
    for i in 0..200 {
        let sigma = rng.gen_range(2.0..6.0);
        let (cx, cy) = (rng.gen_range(0.0..w as f64), rng.gen_range(0.0..h as f64));
        let heat = gaussian_heatmap(w, h, cx, cy, sigma, 0);
        let boxes = generate_bboxes(&heat, &cfg).map_err(|e| e.to_string())?;
        let (low, high): (Vec<&TaggedBox>, Vec<&TaggedBox>) = boxes.iter().partition(|b| b.threshold == 60.0);
        if high.iter().any(|hb| !low.iter().any(|lb| lb.bbox.contains_box(&hb.bbox))) {
            return Err(format!("placement {i}: a 180 box is not nested in a 60 box"));
        }
        let truth = true_box(w, h, cx, cy, sigma);
        if low.iter().map(|b| iou(&b.bbox, &truth)).fold(0.0, f64::max) >= 0.5 {
            hits += 1;
        }
    }
    let rate = hits as f64 / 200.0;
    if rate < 0.95 {
        return Err(format!("IoU >= 0.5 in {hits}/200"));
    }
    Ok(format!("IoU >= 0.5 in {hits}/200, nesting exact"))
}

fn loss_contract() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(700);
    for i in 0..200 {
        let k = 14;
        let d = rng.gen_range(1..=6);
        let probs: Vec<f64> = (0..k).map(|_| rng.gen_range(0.01..0.99)).collect();
        let labels: Vec<u8> = (0..k).map(|_| rng.gen_range(0..=1)).collect();
        let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let p = Projection::seeded(d, 4, i).unwrap();
        let proj = FeatureProjections::new(p.clone(), p).unwrap();
        let r = total_loss(&probs, &labels, &v, &v, &proj, &LossConfig::default()).map_err(|e| e.to_string())?;
        if r.total != classification_loss(&probs, &labels).unwrap() || r.distance != 0.0 {
            return Err(format!("case {i}: L_II {} != L_I {}", r.total, r.classification));
        }
    }
    let mut worst = 0.0f64;
    for i in 0..200 {
        let (di, dr) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let probs: Vec<f64> = (0..14).map(|_| rng.gen_range(0.01..0.99)).collect();
        let labels: Vec<u8> = (0..14).map(|_| rng.gen_range(0..=1)).collect();
        let i_f: Vec<f64> = (0..di).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let r_f: Vec<f64> = (0..dr).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let proj = FeatureProjections::seeded(di, dr, 8, 1000 + i).unwrap();
        let cfg = LossConfig::default();
        let g = total_loss_grad(&probs, &labels, &i_f, &r_f, &proj, &cfg).map_err(|e| e.to_string())?;
        for j in 0..di {
            let num = central_difference(&i_f, j, 1e-6, |v| total_loss(&probs, &labels, v, &r_f, &proj, &cfg).unwrap().total);
            let rel = (g.image_features[j] - num).abs() / g.image_features[j].abs().max(num.abs()).max(1.0);
            if rel > 1e-6 {
                return Err(format!("case {i}, coordinate {j}: relative error {rel:e}"));
            }
            worst = worst.max(rel);
        }
    }
    Ok(format!("L_II == L_I on 200 coincident cases, gradient worst {worst:.3e}"))
}

fn run_ok(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = radloc(args);
    if !out.status.success() {
        return Err(format!("radloc {args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

/// Cases built from mask-generation output: the first 60 box of each entry
/// is the reference and all of its boxes are predictions.
fn cases_from_boxes(boxes_jsonl: &[u8], path: &Path) -> Result<(), String> {
    let mut lines = String::new();
    for (i, line) in String::from_utf8_lossy(boxes_jsonl).lines().enumerate() {
        let v: serde_json::Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
        let boxes = v["boxes"].as_array().cloned().unwrap_or_default();
        if let Some(gt) = boxes.first() {
            lines.push_str(&format!(
                "{{\"image_id\":\"e{i}\",\"class_id\":{},\"gt\":{gt},\"preds\":{}}}\n",
                gt["class_id"],
                serde_json::Value::Array(boxes.clone())
            ));
        }
    }
    fs::write(path, lines).map_err(|e| e.to_string())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let manifest = build_fixture(dir.path(), 20);
    let m = manifest.to_str().unwrap();
    let start = Instant::now();
    let mut runs = Vec::new();
    for jobs in ["1", "8", "1", "8"] {
        let json = run_ok(&["extract", m, "--jobs", jobs, "--strict"])?;
        let csv = run_ok(&["extract", m, "--jobs", jobs, "--strict", "--format", "csv"])?;
        let boxes = run_ok(&["maskgen", m, "--jobs", jobs])?;
        let cases = dir.path().join(format!("cases_{}.jsonl", runs.len()));
        cases_from_boxes(&boxes, &cases)?;
        let report = run_ok(&["eval", cases.to_str().unwrap(), "--jobs", jobs, "--format", "csv"])?;
        runs.push((json, csv, boxes, report));
    }
    let t = start.elapsed();
    if runs.iter().any(|r| *r != runs[0]) {
        return Err("outputs differ between runs".into());
    }
    let records = String::from_utf8_lossy(&runs[0].0).lines().count();
    if records < 20 {
        return Err(format!("only {records} feature records"));
    }
    if t > Duration::from_secs(10) {
        return Err(format!("took {}", secs(t)));
    }
    Ok(format!("{records} records, identical over 4 runs at jobs 1 and 8, {}", secs(t)))
}

fn table_shape() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cases = perfect_cases(dir.path());
    let csv = String::from_utf8(run_ok(&["eval", cases.to_str().unwrap(), "--format", "csv"])?).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    let header = "T(IoU),Atelectasis,Cardiomegaly,Effusion,Infiltration,Mass,Nodule,Pneumonia,Pneumothorax,Mean";
    if rows.first() != Some(&header) {
        return Err(format!("header is {:?}", rows.first()));
    }
    if rows.len() != 8 {
        return Err(format!("{} threshold rows", rows.len() - 1));
    }
    for (k, row) in rows[1..].iter().enumerate() {
        let cells: Vec<&str> = row.split(',').collect();
        let t: f64 = cells[0].parse().map_err(|_| format!("bad threshold {}", cells[0]))?;
        if t != (k + 1) as f64 / 10.0 || cells.len() != 10 {
            return Err(format!("row {row}"));
        }
        if cells[1..].iter().any(|c| c.parse::<f64>() != Ok(1.0)) {
            return Err(format!("row {row} is not all 1"));
        }
    }
    Ok("8 classes + Mean at 0.1..0.7, all cells 1".into())
}

fn main() -> ExitCode {
    let checks: [Check; 9] = [
        ("texture matrices match brute-force oracles", texture_oracles),
        ("zone/run/dependence mass identities", mass_identities),
        ("triplet attention gradient check", gradcheck_instances),
        ("zero-parameter attention halves its input", zero_weight_closed_form),
        ("rank AUC matches pairwise counting", auc_oracle),
        ("heatmap box generation on Gaussian blobs", mask_generation),
        ("regularized loss contract", loss_contract),
        ("batch outputs are deterministic", determinism),
        ("localization table layout", table_shape),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", checks.len() - failed, checks.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
