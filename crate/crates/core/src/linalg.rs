//! Small dense helpers: orthonormalization, complements, direction nets.

use nalgebra::{DMatrix, DVector};

/// Orthonormal basis (as columns) of the orthogonal complement of the unit
/// vector `x` in R^n, obtained from the Householder reflection sending `x`
/// to the first coordinate axis.
pub fn unit_complement(x: &DVector<f64>) -> DMatrix<f64> {
    let n = x.len();
    let mut v = x.clone();
    let sign = if x[0] >= 0.0 { 1.0 } else { -1.0 };
    v[0] += sign * x.norm();
    let vv = v.dot(&v);
    let mut h = DMatrix::<f64>::identity(n, n);
    if vv > 0.0 {
        h -= (&v * v.transpose()) * (2.0 / vv);
    }
    // Column 0 of h is -sign * x; the remaining columns span x-perp.
    h.columns(1, n - 1).into_owned()
}

/// Orthonormal completion of the columns of `basis` (assumed orthonormal)
/// to a basis of R^dim. Returns only the new columns.
pub fn orthonormal_complement(basis: &DMatrix<f64>) -> DMatrix<f64> {
    let dim = basis.nrows();
    let k = basis.ncols();
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(dim - k);
    let existing: Vec<DVector<f64>> = basis.column_iter().map(|c| c.into_owned()).collect();
    // Candidates ordered by how far they stick out of the current span, so
    // the choice is deterministic and well conditioned.
    for _ in 0..dim - k {
        let mut best: Option<(f64, DVector<f64>)> = None;
        for a in 0..dim {
            let mut e = DVector::<f64>::zeros(dim);
            e[a] = 1.0;
            let r = project_out(&e, existing.iter().chain(out.iter()));
            let norm = r.norm();
            if best.as_ref().is_none_or(|(b, _)| norm > *b + 1e-12) {
                best = Some((norm, r));
            }
        }
        let (_, r) = best.expect("dimension is positive");
        let r = project_out(&r, existing.iter().chain(out.iter()));
        out.push(r.normalize());
    }
    DMatrix::from_columns(&out)
}

/// Subtracts the components along each (orthonormal) vector, twice for
/// numerical orthogonality.
pub fn project_out<'a, I>(v: &DVector<f64>, basis: I) -> DVector<f64>
where
    I: Iterator<Item = &'a DVector<f64>> + Clone,
{
    let mut r = v.clone();
    for _ in 0..2 {
        for b in basis.clone() {
            let d = b.dot(&r);
            r.axpy(-d, b, 1.0);
        }
    }
    r
}

/// Largest absolute entry of a matrix.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

const PRIMES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

pub(crate) fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}

/// Deterministic low-discrepancy set of `count` unit vectors in R^dim.
///
/// Halton points are pushed through Box-Muller to a Gaussian sample and then
/// normalized, which gives a rotation-agnostic spread on the sphere.
pub fn sphere_net(dim: usize, count: usize) -> Vec<DVector<f64>> {
    assert!(dim >= 1 && dim <= 2 * PRIMES.len());
    let pairs = dim.div_ceil(2);
    let mut out = Vec::with_capacity(count);
    let mut index = 1u64;
    while out.len() < count {
        let mut g = DVector::<f64>::zeros(dim);
        for p in 0..pairs {
            let u1 = radical_inverse(index, PRIMES[2 * p] as u64);
            let u2 = radical_inverse(index, PRIMES[2 * p + 1] as u64);
            let rad = (-2.0 * u1.ln()).sqrt();
            let ang = 2.0 * std::f64::consts::PI * u2;
            g[2 * p] = rad * ang.cos();
            if 2 * p + 1 < dim {
                g[2 * p + 1] = rad * ang.sin();
            }
        }
        index += 1;
        let norm = g.norm();
        if norm > 1e-6 {
            out.push(g / norm);
        }
    }
    out
}
