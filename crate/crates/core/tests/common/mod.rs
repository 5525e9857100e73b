//! Brute-force reference transcriptions of the archive updates and the
//! stagnation check, plus random micro-instance generators.

#![allow(dead_code)]

use ctaea::decomposition::{IdealPoint, WeightVectorSet};
use ctaea::Solution;
use rand::Rng;

pub fn solution(id: usize, f: Vec<f64>, cv: f64) -> Solution {
    Solution {
        x: vec![id as f64],
        f,
        g: if cv > 0.0 { vec![-cv] } else { vec![0.0] },
        h: vec![],
        cv,
    }
}

pub fn id_of(s: &Solution) -> usize {
    s.x[0] as usize
}

/// Random candidates with continuous objectives; roughly a third are exact
/// copies of an earlier candidate so tie-breaks get exercised.
pub fn random_candidates<R: Rng>(rng: &mut R, count: usize, m: usize, p_feasible: f64) -> Vec<Solution> {
    let mut out: Vec<Solution> = Vec::with_capacity(count);
    for id in 0..count {
        if id > 0 && rng.gen_bool(0.3) {
            let src = out[rng.gen_range(0..id)].clone();
            out.push(solution(id, src.f, src.cv));
            continue;
        }
        let f: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..2.0)).collect();
        let cv = if rng.gen_bool(p_feasible) {
            0.0
        } else {
            rng.gen_range(0.01..1.0)
        };
        out.push(solution(id, f, cv));
    }
    out
}

fn tch(f: &[f64], w: &[f64], z: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..f.len() {
        let wj = if w[j] < 1e-6 { 1e-6 } else { w[j] };
        worst = worst.max((f[j] - z[j]).abs() / wj);
    }
    worst
}

/// Subregion by largest cosine between f - z and the weight; ties and the
/// zero vector go to the lowest index.
fn subregion(f: &[f64], weights: &[Vec<f64>], z: &[f64]) -> usize {
    let d: Vec<f64> = f.iter().zip(z).map(|(a, b)| a - b).collect();
    let dn = d.iter().map(|v| v * v).sum::<f64>().sqrt();
    if dn == 0.0 {
        return 0;
    }
    let mut best = 0;
    let mut best_cos = f64::NEG_INFINITY;
    for (i, w) in weights.iter().enumerate() {
        let wn = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        let cos = d.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / (dn * wn);
        if cos > best_cos {
            best_cos = cos;
            best = i;
        }
    }
    best
}

/// Ids admitted to the CA, as a sorted list.
pub fn oracle_update_ca(
    ca: &[Solution],
    offspring: &[Solution],
    weights: &WeightVectorSet,
    z: &IdealPoint,
    n: usize,
) -> Vec<usize> {
    let w = weights.vectors();
    let z = z.as_slice();
    let hybrid: Vec<&Solution> = ca.iter().chain(offspring).collect();
    let s_fea: Vec<&Solution> = hybrid.iter().copied().filter(|s| s.cv == 0.0).collect();
    let mut s_infea: Vec<&Solution> = hybrid.iter().copied().filter(|s| s.cv > 0.0).collect();

    let mut s: Vec<usize> = Vec::new();
    if s_fea.len() < n {
        s.extend(s_fea.iter().map(|x| id_of(x)));
        while s.len() < n {
            // argmin CV, earliest candidate on ties
            let mut k = 0;
            for (i, x) in s_infea.iter().enumerate() {
                if x.cv < s_infea[k].cv {
                    k = i;
                }
            }
            s.push(id_of(s_infea.remove(k)));
        }
    } else if s_fea.len() == n {
        s.extend(s_fea.iter().map(|x| id_of(x)));
    } else {
        let mut delta_sets: Vec<Vec<&Solution>> = vec![Vec::new(); w.len()];
        for x in &s_fea {
            delta_sets[subregion(&x.f, w, z)].push(x);
        }
        let mut best_value = vec![0.0; w.len()];
        for i in 0..w.len() {
            if delta_sets[i].is_empty() {
                continue;
            }
            let mut k = 0;
            for (j, x) in delta_sets[i].iter().enumerate() {
                if tch(&x.f, &w[i], z) < tch(&delta_sets[i][k].f, &w[i], z) {
                    k = j;
                }
            }
            let hat = delta_sets[i].remove(k);
            best_value[i] = tch(&hat.f, &w[i], z);
            s.push(id_of(hat));
        }
        while s.len() < n {
            let mut pick: Option<(f64, usize, usize)> = None;
            for i in 0..w.len() {
                for (j, x) in delta_sets[i].iter().enumerate() {
                    let d = (best_value[i] - tch(&x.f, &w[i], z)).abs();
                    let better = match pick {
                        None => true,
                        Some((bd, _, _)) => d < bd,
                    };
                    if better {
                        pick = Some((d, i, j));
                    }
                }
            }
            let (_, i, j) = pick.unwrap();
            s.push(id_of(delta_sets[i].remove(j)));
        }
    }
    s.sort_unstable();
    s
}

/// Ids surviving the DA update, as a sorted list.
pub fn oracle_update_da(
    da: &[Solution],
    offspring: &[Solution],
    weights: &WeightVectorSet,
    z: &IdealPoint,
    n: usize,
) -> Vec<usize> {
    let w = weights.vectors();
    let z = z.as_slice();
    let mut m_d: Vec<&Solution> = da.iter().chain(offspring).collect();
    let mut delta_sets: Vec<Vec<usize>> = vec![Vec::new(); w.len()];
    for (pos, x) in m_d.iter().enumerate() {
        delta_sets[subregion(&x.f, w, z)].push(pos);
    }
    let mut removed = vec![false; m_d.len()];
    let mut size = m_d.len();
    while size > n {
        let mut c = 0;
        for i in 0..w.len() {
            if delta_sets[i].len() > delta_sets[c].len() {
                c = i;
            }
        }
        // argmax tch; later insertion wins ties
        let mut k = 0;
        for (j, &pos) in delta_sets[c].iter().enumerate() {
            if tch(&m_d[pos].f, &w[c], z) >= tch(&m_d[delta_sets[c][k]].f, &w[c], z) {
                k = j;
            }
        }
        let pos = delta_sets[c].remove(k);
        removed[pos] = true;
        size -= 1;
    }
    let mut out: Vec<usize> = Vec::new();
    for (pos, x) in m_d.drain(..).enumerate() {
        if !removed[pos] {
            out.push(id_of(x));
        }
    }
    out.sort_unstable();
    out
}

fn dominates(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y)
}

/// (rho_current, rho_last, stagnant) by pairwise dominance over CA ∪ S.
pub fn oracle_stagnation(ca: &[Solution], last: &[Solution]) -> (f64, f64, bool) {
    let union: Vec<&Solution> = ca.iter().chain(last).collect();
    let share = |part: &[Solution]| {
        let nd = part
            .iter()
            .filter(|x| !union.iter().any(|y| dominates(&y.f, &x.f)))
            .count();
        nd as f64 / part.len() as f64
    };
    let rho_c = share(ca);
    let rho_lc = share(last);
    (rho_c, rho_lc, rho_lc > rho_c)
}
