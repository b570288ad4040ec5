//! Brute-force reference implementations used by the property and
//! acceptance tests. They enumerate pixel pairs, runs and neighbourhoods
//! directly instead of sharing any code path with the library.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;
use radloc_core::radiomics::{Direction, QuantizedRoi, TextureMatrix};

pub type Counts = BTreeMap<(usize, usize), f64>;

/// Random `w x h` quantized region with `ng` in `2..=8` and a random mask.
pub fn random_roi(rng: &mut impl Rng, w: usize, h: usize) -> QuantizedRoi {
    let ng = rng.gen_range(2..=8u32);
    let density = rng.gen_range(0.2..1.0);
    loop {
        let levels: Vec<u32> = (0..w * h)
            .map(|_| if rng.gen_bool(density) { rng.gen_range(1..=ng) } else { 0 })
            .collect();
        if let Ok(q) = QuantizedRoi::from_levels(w, h, levels, ng) {
            return q;
        }
    }
}

/// Masked pixels as `(x, y, level)`.
pub fn masked(q: &QuantizedRoi) -> Vec<(i64, i64, u32)> {
    let mut out = Vec::new();
    for y in 0..q.height() {
        for x in 0..q.width() {
            let l = q.level(x, y);
            if l > 0 {
                out.push((x as i64, y as i64, l));
            }
        }
    }
    out
}

/// Non-zero entries keyed by `(row + 1, col + 1)`.
pub fn nonzero(m: &TextureMatrix) -> Counts {
    let mut out = Counts::new();
    for i in 0..m.rows {
        for j in 0..m.cols {
            let v = m.get(i, j);
            if v != 0.0 {
                out.insert((i + 1, j + 1), v);
            }
        }
    }
    out
}

fn bump(c: &mut Counts, k: (usize, usize)) {
    *c.entry(k).or_insert(0.0) += 1.0;
}

fn offset(d: Direction) -> (i64, i64) {
    match d.degrees() {
        0 => (1, 0),
        45 => (1, -1),
        90 => (0, -1),
        135 => (-1, -1),
        _ => unreachable!(),
    }
}

/// Every ordered pair of masked pixels whose displacement is `+-delta * dir`.
pub fn glcm_oracle(q: &QuantizedRoi, delta: usize, d: Direction) -> Counts {
    let (dx, dy) = offset(d);
    let (dx, dy) = (dx * delta as i64, dy * delta as i64);
    let px = masked(q);
    let mut c = Counts::new();
    for &(x1, y1, l1) in &px {
        for &(x2, y2, l2) in &px {
            if (x2 - x1, y2 - y1) == (dx, dy) || (x1 - x2, y1 - y2) == (dx, dy) {
                bump(&mut c, (l1 as usize, l2 as usize));
            }
        }
    }
    c
}

/// Zones by iterated label propagation: every pixel starts with its own id
/// and repeatedly takes the minimum id among same-level 8-neighbours.
pub fn glszm_oracle(q: &QuantizedRoi) -> Counts {
    let px = masked(q);
    let mut id: Vec<usize> = (0..px.len()).collect();
    loop {
        let mut changed = false;
        for a in 0..px.len() {
            for b in 0..px.len() {
                let (pa, pb) = (px[a], px[b]);
                let adjacent = a != b && (pa.0 - pb.0).abs() <= 1 && (pa.1 - pb.1).abs() <= 1;
                if adjacent && pa.2 == pb.2 && id[b] < id[a] {
                    id[a] = id[b];
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut zones: BTreeMap<usize, (u32, usize)> = BTreeMap::new();
    for (i, p) in px.iter().enumerate() {
        zones.entry(id[i]).or_insert((p.2, 0)).1 += 1;
    }
    let mut c = Counts::new();
    for (level, size) in zones.values() {
        bump(&mut c, (*level as usize, *size));
    }
    c
}

/// Checks every `(start, length)` candidate for being a maximal run.
pub fn glrlm_oracle(q: &QuantizedRoi, d: Direction) -> Counts {
    let (dx, dy) = offset(d);
    let at = |x: i64, y: i64| -> u32 {
        if x < 0 || y < 0 || x >= q.width() as i64 || y >= q.height() as i64 {
            0
        } else {
            q.level(x as usize, y as usize)
        }
    };
    let longest = q.width().max(q.height()) as i64;
    let mut c = Counts::new();
    for &(x, y, l) in &masked(q) {
        for len in 1..=longest {
            let inside = (0..len).all(|k| at(x + k * dx, y + k * dy) == l);
            let closed = at(x - dx, y - dy) != l && at(x + len * dx, y + len * dy) != l;
            if inside && closed {
                bump(&mut c, (l as usize, len as usize));
            }
        }
    }
    c
}

/// `(n_i, s_i)` per level `1..=ng` by scanning all masked pixels for
/// Chebyshev neighbours.
pub fn ngtdm_oracle(q: &QuantizedRoi, delta: usize) -> Vec<(f64, f64)> {
    let px = masked(q);
    let mut out = vec![(0.0, 0.0); q.ng() as usize];
    for &(x, y, l) in &px {
        let (mut sum, mut count) = (0u64, 0u64);
        for &(u, v, m) in &px {
            let cheb = (u - x).abs().max((v - y).abs());
            if cheb >= 1 && cheb <= delta as i64 {
                sum += m as u64;
                count += 1;
            }
        }
        if count > 0 {
            let e = &mut out[l as usize - 1];
            e.0 += 1.0;
            e.1 += (l as f64 - sum as f64 / count as f64).abs();
        }
    }
    out
}

/// Keys are `(level, dependence count + 1)` to match [`nonzero`] indexing.
pub fn gldm_oracle(q: &QuantizedRoi, delta: usize, alpha: u32) -> Counts {
    let px = masked(q);
    let mut c = Counts::new();
    for &(x, y, l) in &px {
        let dep = px
            .iter()
            .filter(|&&(u, v, m)| {
                let cheb = (u - x).abs().max((v - y).abs());
                cheb >= 1 && cheb <= delta as i64 && m.abs_diff(l) <= alpha
            })
            .count();
        bump(&mut c, (l as usize, dep + 1));
    }
    c
}

/// Mann-Whitney AUC by enumerating every positive/negative pair.
pub fn auc_pairwise(scores: &[f64], labels: &[u8]) -> f64 {
    let (mut wins, mut pairs) = (0.0, 0.0);
    for (i, &si) in scores.iter().enumerate() {
        if labels[i] != 1 {
            continue;
        }
        for (j, &sj) in scores.iter().enumerate() {
            if labels[j] != 0 {
                continue;
            }
            pairs += 1.0;
            if si > sj {
                wins += 1.0;
            } else if si == sj {
                wins += 0.5;
            }
        }
    }
    wins / pairs
}

/// Central difference of `f` at `x` along coordinate `i`.
pub fn central_difference(x: &[f64], i: usize, eps: f64, f: impl Fn(&[f64]) -> f64) -> f64 {
    let mut plus = x.to_vec();
    plus[i] += eps;
    let mut minus = x.to_vec();
    minus[i] -= eps;
    (f(&plus) - f(&minus)) / (2.0 * eps)
}
