//! Generating functions `Σ_{ℓ ∈ P} X^{φ(ℓ)}` of Presburger sets under an
//! affine map `φ = (φ_1, …, φ_s)` that is nonnegative on `P` and has finite
//! fibers.
//!
//! The quantifier-free form of `P` is cut into disjoint cubes, and each cube
//! is summed in closed form one variable at a time.

mod cells;
mod irf;
mod poly;
mod sum;

pub use irf::{expand_gf, IntegerRationalFunction};

use super::{eliminate_quantifiers, Formula, LinearForm, PresburgerError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GfOptions {
    /// Restrict `P` to `ℓ_j ≥ 0` for every variable.
    pub nonnegative: bool,
}

impl Default for GfOptions {
    fn default() -> Self {
        GfOptions { nonnegative: true }
    }
}

/// The generating function of `P ⊆ Z^nvars` (free variables `ℓ_1..ℓ_nvars`)
/// weighted by `X^{φ(ℓ)}`.
pub fn generating_function(
    p: &Formula,
    nvars: usize,
    phi: &[LinearForm],
    opts: GfOptions,
) -> Result<IntegerRationalFunction, PresburgerError> {
    if let Some(&v) = p.free_vars().iter().next_back() {
        if v >= nvars {
            return Err(PresburgerError::Arity {
                expected: nvars,
                got: v + 1,
            });
        }
    }
    if let Some(l) = phi.iter().find(|l| l.var_bound() > nvars) {
        return Err(PresburgerError::Arity {
            expected: nvars,
            got: l.var_bound(),
        });
    }
    let mut parts = vec![eliminate_quantifiers(p)?];
    if opts.nonnegative {
        parts.extend((0..nvars).map(|j| Formula::Ge(LinearForm::var(j))));
    }
    let body = Formula::And(parts).simplify()?;

    let cubes = cells::cubes(&body)?;
    for (k, l) in phi.iter().enumerate() {
        let trivially_nonnegative =
            opts.nonnegative && l.constant_term() >= 0 && l.coeffs().iter().all(|&a| a >= 0);
        if trivially_nonnegative {
            continue;
        }
        // some point of P with φ_k ≤ -1?
        let below = l.checked_scale(-1)?.checked_add_constant(-1)?;
        for cube in &cubes {
            let mut ges = cube.ges.clone();
            ges.push(below.clone());
            if sum::maybe_feasible(&ges) && sum::feasible(&ges, &cube.mods)? {
                return Err(PresburgerError::NegativeFunction(k + 1));
            }
        }
    }
    sum::sum_cubes(cubes, nvars, phi)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use num_bigint::BigInt;

    use super::*;
    use crate::presburger::{enumerate, parse_formula, parse_linear_forms};

    fn gf(p: &str, nvars: usize, phi: &str) -> IntegerRationalFunction {
        generating_function(
            &parse_formula(p).unwrap(),
            nvars,
            &parse_linear_forms(phi).unwrap(),
            GfOptions::default(),
        )
        .unwrap()
    }

    /// Coefficients of all monomials of total degree ≤ `deg` by listing the
    /// points of a box large enough to contain every contributing point.
    fn brute(p: &str, nvars: usize, phi: &str, boxb: u64, deg: u32) -> BTreeMap<Vec<u32>, BigInt> {
        let f = eliminate_quantifiers(&parse_formula(p).unwrap()).unwrap();
        let phi = parse_linear_forms(phi).unwrap();
        let mut out: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for pt in enumerate(&f, nvars, boxb).unwrap() {
            let e: Vec<u32> = phi.iter().map(|l| l.eval(&pt) as u32).collect();
            if e.iter().sum::<u32>() <= deg {
                *out.entry(e).or_default() += 1;
            }
        }
        out
    }

    #[test]
    fn examples() {
        assert_eq!(gf("l1 >= 0", 1, "l1").to_string(), "1 / (1 - X1)");
        assert_eq!(
            gf("l1 >= 0 && l1 = 1 mod 2", 1, "l1").to_string(),
            "X1 / (1 - X1^2)"
        );
        assert_eq!(
            gf("l1 >= 1 && l2 >= 1", 2, "l1, l2").to_string(),
            "X1*X2 / ((1 - X1) * (1 - X2))"
        );
    }

    #[test]
    fn matches_enumeration() {
        for (p, n, phi) in [
            ("l1 <= l2", 2, "l2"),
            ("l1 <= l2", 2, "l1 + l2"),
            ("2*l1 <= 3*l2 + 1 && l1 + l2 = 0 mod 3", 2, "l1 + l2, l2"),
            ("l2 <= 4 && l1 >= l2", 2, "l1"),
            ("exists l3 . l1 = 2*l3 + l2 && l3 <= l2", 2, "l1, l2"),
            ("l1 + l2 <= 5 || l1 = l2", 2, "l1 + 2*l2"),
            ("l3 <= 2 && l1 + l2 >= l3", 3, "l1, l2 + l3"),
        ] {
            let g = gf(p, n, phi);
            assert_eq!(
                expand_gf(&g, 9),
                brute(p, n, phi, 20, 9),
                "{p} / {phi}: {g}"
            );
        }
    }

    #[test]
    fn bounded_variables_allow_decreasing_maps() {
        let (p, phi) = ("l1 <= 6 && l2 <= l1", "l1 - l2, l1");
        let g = gf(p, 2, phi);
        assert_eq!(expand_gf(&g, 14), brute(p, 2, phi, 6, 14), "{g}");
    }

    #[test]
    fn rejections() {
        let p = parse_formula("l1 >= 0").unwrap();
        let neg = parse_linear_forms("l1 - 3").unwrap();
        assert_eq!(
            generating_function(&p, 1, &neg, GfOptions::default()),
            Err(PresburgerError::NegativeFunction(1))
        );
        let q = parse_formula("l1 >= 0 && l2 >= 0").unwrap();
        let proj = parse_linear_forms("l1").unwrap();
        assert!(matches!(
            generating_function(&q, 2, &proj, GfOptions::default()),
            Err(PresburgerError::InfiniteFiber(_))
        ));
    }
}
