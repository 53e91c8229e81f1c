#![allow(dead_code)]

use lcac::ambient::{AmbientStructure, CurvatureParams};
use lcac::subpoint::{build_point, SecondFundamentalForm, SubmanifoldPoint};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn e(dim: usize, i: usize) -> DVector<f64> {
    let mut v = DVector::zeros(dim);
    v[i] = 1.0;
    v
}

pub fn random_params(rng: &mut ChaCha8Rng) -> CurvatureParams {
    CurvatureParams::new(
        rng.random_range(-10.0..=10.0),
        rng.random_range(-10.0..=10.0),
        rng.random_range(-10.0..=10.0),
    )
}

pub fn random_sigma(n: usize, codim: usize, scale: f64, rng: &mut ChaCha8Rng) -> SecondFundamentalForm {
    let components = (0..codim)
        .map(|_| {
            let mut a = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in i..n {
                    let v = rng.random_range(-scale..=scale);
                    a[(i, j)] = v;
                    a[(j, i)] = v;
                }
            }
            a
        })
        .collect();
    SecondFundamentalForm::from_components(n, components).unwrap()
}

pub fn random_unit(n: usize, rng: &mut ChaCha8Rng) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(n, |_, _| rng.random_range(-1.0..=1.0));
        let norm = v.norm();
        if norm > 1e-3 && norm <= 1.0 {
            return v / norm;
        }
    }
}

/// ξ, ∂xᵢ and cos θ ∂yᵢ + sin θ ∂x_{q+i} for i < q: a slant point with
/// angle θ (invariant at θ = 0 needs only m ≥ q, but the frame asks for
/// m ≥ 2q unless θ = 0).
pub fn slant_frame(m: usize, q: usize, theta: f64) -> Vec<DVector<f64>> {
    let dim = 2 * m + 1;
    let mut frame = vec![e(dim, 2 * m)];
    for i in 0..q {
        frame.push(e(dim, i));
        let mut v = e(dim, m + i) * theta.cos();
        if theta != 0.0 {
            v += e(dim, q + i) * theta.sin();
        }
        frame.push(v);
    }
    frame
}

/// ξ and ∂x₁..∂x_{n-1}.
pub fn anti_frame(m: usize, n: usize) -> Vec<DVector<f64>> {
    let dim = 2 * m + 1;
    let mut frame = vec![e(dim, 2 * m)];
    for i in 0..n - 1 {
        frame.push(e(dim, i));
    }
    frame
}

/// ξ, ∂x₁, ∂y₁ (D, h = 1) and ∂x₂, .., ∂x_{1+d} (D⊥ of dimension d).
pub fn cr_frame(m: usize, d: usize) -> Vec<DVector<f64>> {
    let dim = 2 * m + 1;
    let mut frame = vec![e(dim, 2 * m), e(dim, 0), e(dim, m)];
    for i in 0..d {
        frame.push(e(dim, 1 + i));
    }
    frame
}

pub fn point_with(
    m: usize,
    params: CurvatureParams,
    frame: &[DVector<f64>],
    sigma: SecondFundamentalForm,
) -> (AmbientStructure, SubmanifoldPoint) {
    let s = AmbientStructure::standard(m, params).unwrap();
    let p = build_point(&s, frame, sigma).unwrap();
    (s, p)
}
