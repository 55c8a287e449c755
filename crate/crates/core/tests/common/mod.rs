//! Independent oracles and random generators shared by the integration suites.
#![allow(dead_code)]

use std::collections::HashMap;

use itertools::Itertools;
use loswap::{CMatrix, Circuit64, Complex64, Component, FockState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_matrix(rng: &mut impl Rng, n: usize) -> CMatrix {
    let data = (0..n * n).map(|_| random_complex(rng)).collect();
    CMatrix::new(n, n, data).unwrap()
}

pub fn random_normalized(rng: &mut impl Rng, len: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..len).map(|_| random_complex(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Random lossless circuit of couplers, phase shifters and MZIs.
pub fn random_circuit(rng: &mut impl Rng, width: usize, elements: usize) -> Circuit64 {
    let mut c = Circuit64::new(width).unwrap();
    for _ in 0..elements {
        let a = rng.random_range(0..width);
        let mut b = rng.random_range(0..width);
        if width > 1 {
            while b == a {
                b = rng.random_range(0..width);
            }
        }
        let angle = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let part = match (width > 1, rng.random_range(0..4)) {
            (false, _) | (_, 0) => Component::phase_shifter(a, angle),
            (_, 1) => Component::coupler(a, b, rng.random_range(0.0..1.0)),
            (_, 2) => Component::mzi(a, b, angle),
            _ => Component::rbs(a, b, angle, rng.random_range(-3.0..3.0)),
        };
        c.push(part).unwrap();
    }
    c
}

pub fn random_unitary(rng: &mut impl Rng, width: usize) -> CMatrix {
    random_circuit(rng, width, 6 * width).compile().unwrap().unitary
}

/// Permanent as the plain sum over all permutations.
pub fn naive_permanent(m: &CMatrix) -> Complex64 {
    let n = m.rows();
    (0..n)
        .permutations(n)
        .map(|p| p.iter().enumerate().fold(Complex64::new(1.0, 0.0), |acc, (r, &c)| acc * m[(r, c)]))
        .sum()
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

/// Evolves `|input⟩` by substituting `a_i† → Σ_j U_ji a_j†` into
/// `Π (a_i†)^{n_i} / √(n_i!)` and expanding the polynomial, then reading
/// monomials back as normalized Fock states. Returns occupation → amplitude.
pub fn creation_operator_evolve(u: &CMatrix, input: &FockState) -> HashMap<Vec<usize>, Complex64> {
    let width = u.rows();
    // polynomial: sorted multiset of output modes -> coefficient
    let mut poly: HashMap<Vec<usize>, Complex64> = HashMap::new();
    poly.insert(Vec::new(), Complex64::new(1.0, 0.0));
    for (mode, &count) in input.occupations().iter().enumerate() {
        for _ in 0..count {
            let mut next: HashMap<Vec<usize>, Complex64> = HashMap::new();
            for (mono, coef) in &poly {
                for j in 0..width {
                    let factor = u[(j, mode)];
                    if factor.norm() == 0.0 {
                        continue;
                    }
                    let mut m = mono.clone();
                    m.push(j);
                    m.sort_unstable();
                    *next.entry(m).or_default() += coef * factor;
                }
            }
            poly = next;
        }
    }
    let in_norm: f64 = input.occupations().iter().map(|&k| factorial(k)).product::<f64>().sqrt();
    poly.into_iter()
        .map(|(mono, coef)| {
            let mut occ = vec![0; width];
            for j in mono {
                occ[j] += 1;
            }
            // (a†)^k |0⟩ = √k! |k⟩
            let out_norm: f64 = occ.iter().map(|&k| factorial(k)).product::<f64>().sqrt();
            (occ, coef * out_norm / in_norm)
        })
        .collect()
}

pub fn kron(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

pub fn kron_all(parts: &[Vec<Complex64>]) -> Vec<Complex64> {
    parts.iter().fold(vec![Complex64::new(1.0, 0.0)], |acc, p| kron(&acc, p))
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Number of adjacent swaps bubble sort performs on `v`.
pub fn bubble_sort_swaps(v: &[usize]) -> usize {
    let mut v = v.to_vec();
    let mut swaps = 0;
    for end in (1..v.len()).rev() {
        for i in 0..end {
            if v[i] > v[i + 1] {
                v.swap(i, i + 1);
                swaps += 1;
            }
        }
    }
    swaps
}

/// Product state with qubit `q`'s single-qubit state placed at position
/// `image[q]`.
pub fn permuted_product(parts: &[Vec<Complex64>], image: &[usize]) -> Vec<Complex64> {
    let mut placed = vec![Vec::new(); parts.len()];
    for (q, &pos) in image.iter().enumerate() {
        placed[pos] = parts[q].clone();
    }
    kron_all(&placed)
}
