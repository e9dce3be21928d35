//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use anyonic_core::matrix::{ComplexMatrix, ONE, ZERO};
use anyonic_core::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `e^{iHt}` by scaling and squaring around a truncated Taylor series.
pub fn expm_i(h: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let n = h.rows();
    let x = h.scale(c(0.0, t));
    let norm = (0..n)
        .map(|r| x.row(r).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut s = 0;
    while norm / 2f64.powi(s) > 0.5 {
        s += 1;
    }
    let y = x.scale(c(1.0 / 2f64.powi(s), 0.0));
    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=30 {
        term = term.matmul(&y).unwrap().scale(c(1.0 / k as f64, 0.0));
        sum = ComplexMatrix::from_fn(n, n, |r, q| sum.get(r, q) + term.get(r, q));
    }
    for _ in 0..s {
        sum = sum.matmul(&sum).unwrap();
    }
    sum
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub fn inversions(p: &[usize]) -> usize {
    let mut k = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                k += 1;
            }
        }
    }
    k
}

/// `Σ_σ e^{iτ(σ)φ} Π_j B[j, σ(j)]` term by term.
pub fn naive_immanant(b: &ComplexMatrix, phi: f64) -> Complex64 {
    permutations(b.rows())
        .iter()
        .map(|p| {
            let prod = p.iter().enumerate().fold(ONE, |acc, (j, &s)| acc * b.get(j, s));
            Complex64::cis(inversions(p) as f64 * phi) * prod
        })
        .sum()
}

pub fn naive_permanent(b: &ComplexMatrix) -> Complex64 {
    naive_immanant(b, 0.0)
}

pub fn naive_determinant(b: &ComplexMatrix) -> Complex64 {
    permutations(b.rows())
        .iter()
        .map(|p| {
            let prod = p.iter().enumerate().fold(ONE, |acc, (j, &s)| acc * b.get(j, s));
            if inversions(p) % 2 == 0 {
                prod
            } else {
                -prod
            }
        })
        .sum()
}

/// `|Σ_σ e^{iτ(σ)φ} Π_j A[μ_j, ν_σ(j)]|²`.
pub fn naive_gamma(a: &ComplexMatrix, inputs: &[usize], outputs: &[usize], phi: f64) -> f64 {
    let b = ComplexMatrix::from_fn(outputs.len(), inputs.len(), |r, q| a.get(outputs[r], inputs[q]));
    naive_immanant(&b, phi).norm_sqr()
}

/// Haar-ish random unitary: Gram–Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Rng>(m: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = (0..m)
        .map(|_| {
            (0..m)
                .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect()
        })
        .collect();
    for k in 0..m {
        for j in 0..k {
            let (done, rest) = cols.split_at_mut(k);
            let dot: Complex64 = done[j].iter().zip(&rest[0]).map(|(u, v)| u.conj() * v).sum();
            for (v, u) in rest[0].iter_mut().zip(&done[j]) {
                *v -= dot * u;
            }
        }
        let norm = cols[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for v in &mut cols[k] {
            *v /= norm;
        }
    }
    ComplexMatrix::from_fn(m, m, |r, q| cols[q][r])
}

/// Entries uniform in the unit square, not unitary.
pub fn random_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

/// `(1/√N!) Σ_σ e^{iτ(σ)φ} |ν_σ(1), …, ν_σ(N)⟩` as a dense vector over
/// `extent^N` row-major labels.
pub fn entangled_vector(inputs: &[usize], extent: usize, phi: f64) -> Vec<Complex64> {
    let n = inputs.len();
    let perms = permutations(n);
    let norm = 1.0 / (perms.len() as f64).sqrt();
    let mut v = vec![ZERO; extent.pow(n as u32)];
    for p in &perms {
        let idx = p.iter().fold(0, |acc, &s| acc * extent + inputs[s]);
        v[idx] += Complex64::cis(inversions(p) as f64 * phi) * norm;
    }
    v
}

/// Applies `A` along every tensor axis of a dense `cols^N` vector, giving a
/// `rows^N` vector.
pub fn apply_each_axis(a: &ComplexMatrix, v: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut dims = vec![a.cols(); n];
    let mut cur = v.to_vec();
    for axis in 0..n {
        let outer: usize = dims[..axis].iter().product();
        let inner: usize = dims[axis + 1..].iter().product();
        let (din, dout) = (dims[axis], a.rows());
        let mut next = vec![ZERO; outer * dout * inner];
        for o in 0..outer {
            for s in 0..dout {
                for m in 0..din {
                    let w = a.get(s, m);
                    if w == ZERO {
                        continue;
                    }
                    for i in 0..inner {
                        next[(o * dout + s) * inner + i] += w * cur[(o * din + m) * inner + i];
                    }
                }
            }
        }
        dims[axis] = dout;
        cur = next;
    }
    cur
}

/// Every ordered tuple in `0..extent`, row-major.
pub fn tuples(extent: usize, order: usize) -> Vec<Vec<usize>> {
    (0..extent.pow(order as u32))
        .map(|mut f| {
            let mut t = vec![0; order];
            for slot in (0..order).rev() {
                t[slot] = f % extent;
                f /= extent;
            }
            t
        })
        .collect()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()) + 1e-15
}
