#![allow(dead_code, clippy::needless_range_loop)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wavebench_core::{CMatrix, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(rng: &mut impl Rng, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

pub fn cis(radians: f64) -> C64 {
    C64::new(radians.cos(), radians.sin())
}

pub fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn norm(a: &[C64]) -> f64 {
    a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// `y = M x` by direct summation.
pub fn apply(m: &CMatrix, x: &[C64]) -> Vec<C64> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m[(r, c)] * x[c]).sum())
        .collect()
}

/// Unit-energy root-raised-cosine with unit symbol period.
pub fn rrc(t: f64, beta: f64) -> f64 {
    if t == 0.0 {
        return 1.0 + beta * (4.0 / PI - 1.0);
    }
    if beta > 0.0 && ((4.0 * beta * t).abs() - 1.0).abs() < 1e-9 {
        let arg = PI / (4.0 * beta);
        return beta / 2f64.sqrt() * ((1.0 + 2.0 / PI) * arg.sin() + (1.0 - 2.0 / PI) * arg.cos());
    }
    let num = (PI * t * (1.0 - beta)).sin() + 4.0 * beta * t * (PI * t * (1.0 + beta)).cos();
    num / (PI * t * (1.0 - (4.0 * beta * t).powi(2)))
}

/// Solves `a x = b` by Gauss-Jordan elimination with full pivoting.
pub fn gauss_jordan(a: &CMatrix, b: &[C64]) -> Vec<C64> {
    let n = a.rows();
    let mut m: Vec<Vec<C64>> = (0..n)
        .map(|r| {
            let mut row: Vec<C64> = (0..n).map(|c| a[(r, c)]).collect();
            row.push(b[r]);
            row
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let (mut pr, mut pc, mut best) = (col, col, 0.0);
        for r in col..n {
            for c in col..n {
                if m[r][c].norm() > best {
                    (pr, pc, best) = (r, c, m[r][c].norm());
                }
            }
        }
        m.swap(col, pr);
        for row in m.iter_mut() {
            row.swap(col, pc);
        }
        order.swap(col, pc);
        let pivot = m[col][col];
        for v in m[col].iter_mut() {
            *v /= pivot;
        }
        for r in 0..n {
            if r != col {
                let f = m[r][col];
                let pivot_row = m[col].clone();
                for (v, p) in m[r].iter_mut().zip(pivot_row) {
                    *v -= f * p;
                }
            }
        }
    }
    let mut x = vec![C64::new(0.0, 0.0); n];
    for (i, &var) in order.iter().enumerate() {
        x[var] = m[i][n];
    }
    x
}
