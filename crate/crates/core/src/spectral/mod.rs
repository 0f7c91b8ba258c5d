//! The two-channel sextic Hamiltonian
//! `H = -d²/dy² + y⁶ + (1-4n)y² - 4y²σ3 - 4n k0 σ1`, its gauged form `ĥ`
//! acting on `P(n) ⊕ P(n-2)` in `x = y²`, and everything computed from the
//! restricted `2n × 2n` matrix: spectral polynomial, levels, eigenfunctions,
//! sweeps in the coupling `c = -4n k0`, and a finite-difference check
//! against `H` itself.

mod fd;
mod levels;
mod sweep;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{char_poly, fmt_rational, int, rat, to_f64, CharPoly, ExactMatrix, ParamPoly, Rational, Var};
use crate::weyl::{restrict, DiffOp, MatOp, ModuleSpec};

pub use fd::{
    boundary_amplitude, convergence_study, fd_eigenvalues_jacobi, fd_eigenvalues_window, jacobi_eigenvalues,
    numeric_crosscheck, Convergence, CrossCheck, FdGrid, LevelMatch,
};
pub use levels::{algebraic_spectrum, algebraic_spectrum_with_tol, count_nodes, eigenfunctions_y, AlgebraicSpectrum, EigenVector, Level, YEigenfunction};
pub use sweep::{find_degeneracy, level_gap, modulus_branches, sweep, write_csv, Degeneracy, SweepRow, SweepTable};

/// `(n, k0)`; the coupling shown in plots is `c = -4n k0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HamiltonianSpec {
    pub n: u32,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub k0: Rational,
}

impl HamiltonianSpec {
    pub fn new(n: u32, k0: Rational) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!("n must be at least 2, got {n}")));
        }
        Ok(HamiltonianSpec { n, k0 })
    }

    /// From the coupling `c`, with `k0 = -c / (4n)`.
    pub fn from_c(n: u32, c: Rational) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!("n must be at least 2, got {n}")));
        }
        let k0 = -c / int(4 * n as i64);
        Self::new(n, k0)
    }

    pub fn c_spec(&self) -> Rational {
        -(&self.k0 * int(4 * self.n as i64))
    }

    /// `P(n) ⊕ P(n-2)`: top block on degree `n`.
    pub fn module(&self) -> ModuleSpec {
        module_for(self.n)
    }

    /// `n=.. k0=.. c=..` header used by reports.
    pub fn header(&self) -> String {
        format!(
            "n={} k0={} c={}",
            self.n,
            fmt_rational(&self.k0),
            fmt_rational(&self.c_spec())
        )
    }
}

fn module_for(n: u32) -> ModuleSpec {
    ModuleSpec::new(n as i64, n as i64 - 2).expect("n >= 2")
}

/// Coefficients of the physical potential
/// `V(y) = sextic·y⁶ + quadratic·y² + sigma3·y² σ3 + sigma1 σ1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RawHamiltonian {
    pub n: u32,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub sextic: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub quadratic: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub sigma3: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub sigma1: Rational,
}

impl RawHamiltonian {
    pub fn new(spec: &HamiltonianSpec) -> Self {
        let n = spec.n as i64;
        RawHamiltonian {
            n: spec.n,
            sextic: int(1),
            quadratic: int(1 - 4 * n),
            sigma3: int(-4),
            sigma1: -(&spec.k0 * int(4 * n)),
        }
    }

    /// The symmetric potential matrix at `y`, exactly.
    pub fn potential_at(&self, y: &Rational) -> [[Rational; 2]; 2] {
        let y2 = y * y;
        let y6 = &y2 * &y2 * &y2;
        let scalar = &self.sextic * y6 + &self.quadratic * &y2;
        let s3 = &self.sigma3 * &y2;
        [
            [&scalar + &s3, self.sigma1.clone()],
            [self.sigma1.clone(), &scalar - &s3],
        ]
    }

    /// Top and bottom diagonal entries and the coupling at `y`.
    pub fn potential_f64(&self, y: f64) -> (f64, f64, f64) {
        let y2 = y * y;
        let scalar = to_f64(&self.sextic) * y2 * y2 * y2 + to_f64(&self.quadratic) * y2;
        let s3 = to_f64(&self.sigma3) * y2;
        (scalar + s3, scalar - s3, to_f64(&self.sigma1))
    }

    /// Two decoupled scalar Hamiltonians when `k0 = 0`.
    pub fn is_decoupled(&self) -> bool {
        self.sigma1 == int(0)
    }
}

fn k0_poly(coeffs: &[i64]) -> ParamPoly {
    ParamPoly::from_ints(Var::K0, coeffs)
}

/// The gauged operator with `k0` kept symbolic:
///
/// ```text
/// ĥ = -(4x∂² + 2∂)·1 - 4n k0² ∂ σ3 + 4 diag(x²∂ - nx, x²∂ - (n-2)x)
///     + 4k0 [[0, -n], [(1 + n k0²)∂², 0]]
/// ```
pub fn gauged_symbolic(n: u32) -> MatOp {
    let n = n as i64;
    let kinetic = &DiffOp::term(1, 2, k0_poly(&[-4])) + &DiffOp::term(0, 1, k0_poly(&[-2]));
    let drift = DiffOp::term(0, 1, k0_poly(&[0, 0, -4 * n]));
    let sl2 = |m: i64| &DiffOp::term(2, 1, k0_poly(&[4])) + &DiffOp::term(1, 0, k0_poly(&[-4 * m]));
    let top = &(&kinetic + &drift) + &sl2(n);
    let bottom = &(&kinetic - &drift) + &sl2(n - 2);
    let upper = DiffOp::scalar(k0_poly(&[0, -4 * n]));
    let lower = DiffOp::term(0, 2, k0_poly(&[0, 4, 0, 4 * n]));
    MatOp::new([[top, upper], [lower, bottom]])
}

/// `ĥ` at the spec's `k0`.
pub fn gauged(spec: &HamiltonianSpec) -> MatOp {
    gauged_symbolic(spec.n).eval_param(&spec.k0)
}

/// `ĥ + 4β x∂·1`, a degree-preserving deformation used to show that the
/// reflection check can fail.
pub fn gauged_with_quartic_hook(n: u32, beta: &Rational) -> MatOp {
    &gauged_symbolic(n) + &MatOp::scalar(DiffOp::euler().scale_rat(&(beta * int(4))))
}

/// Matrix of `ĥ` on `P(n) ⊕ P(n-2)` over `Q[k0]`.
pub fn restricted_symbolic(n: u32) -> Result<ExactMatrix> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("n must be at least 2, got {n}")));
    }
    restrict(&gauged_symbolic(n), &module_for(n)).into_preserved()
}

/// Matrix of `ĥ` at the spec's `k0` (constant entries).
pub fn restricted(spec: &HamiltonianSpec) -> Result<ExactMatrix> {
    Ok(restricted_symbolic(spec.n)?.eval_param(&spec.k0))
}

/// `det(λ - M)` with coefficients in `Q[k0]`.
pub fn spectral_polynomial(n: u32) -> Result<CharPoly> {
    char_poly(&restricted_symbolic(n)?)
}

/// The spectral polynomial rewritten in `c = -4n k0`.
pub fn spectral_polynomial_in_c(n: u32) -> Result<CharPoly> {
    Ok(spectral_polynomial(n)?.reparametrize(&rat(-1, 4 * n as i64), Var::C))
}

/// Outcome of the `E → -E` reflection check on the restricted matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReflectionReport {
    pub n: u32,
    /// `S M S⁻¹ + M` has this many nonzero entries (in `Q[k0]`).
    pub nonzero_entries: usize,
    /// Every odd power of λ has the zero polynomial as coefficient.
    pub char_poly_even: bool,
}

impl ReflectionReport {
    pub fn holds(&self) -> bool {
        self.nonzero_entries == 0
    }

    pub fn line(&self) -> String {
        format!(
            "EQ33 n={} status={} char_poly_even={}",
            self.n,
            if self.holds() { "holds" } else { "fails" },
            self.char_poly_even
        )
    }
}

/// `S = diag((-1)^d on top, -(-1)^d on bottom)` over monomials `x^d`.
pub fn reflection_signs(module: &ModuleSpec) -> Vec<i64> {
    (0..module.dim())
        .map(|k| {
            let (comp, deg) = module.basis(k);
            let s = if deg % 2 == 0 { 1 } else { -1 };
            if comp == 0 {
                s
            } else {
                -s
            }
        })
        .collect()
}

fn reflection_of(op: &MatOp, n: u32) -> Result<ReflectionReport> {
    let module = module_for(n);
    let m = restrict(op, &module).into_preserved()?;
    let s = reflection_signs(&module);
    let mut nonzero = 0;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            // (S M S)_ij + M_ij = (s_i s_j + 1) M_ij
            if s[i] * s[j] != -1 && !m.get(i, j).is_zero() {
                nonzero += 1;
            }
        }
    }
    Ok(ReflectionReport {
        n,
        nonzero_entries: nonzero,
        char_poly_even: char_poly(&m)?.is_even(),
    })
}

/// `S ĥ S⁻¹ = -ĥ` on the restricted matrix, symbolically in `k0`.
pub fn reflection_check(n: u32) -> Result<ReflectionReport> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("n must be at least 2, got {n}")));
    }
    reflection_of(&gauged_symbolic(n), n)
}

/// The same check on the deformed operator of [`gauged_with_quartic_hook`].
pub fn reflection_check_with_hook(n: u32, beta: &Rational) -> Result<ReflectionReport> {
    reflection_of(&gauged_with_quartic_hook(n, beta), n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauged_at_n2_k0_0() {
        let m = restricted(&HamiltonianSpec::new(2, int(0)).unwrap()).unwrap();
        let want: Vec<i64> = vec![0, -2, 0, 0, -8, 0, -12, 0, 0, -4, 0, 0, 0, 0, 0, 0];
        let got = m.to_rationals().unwrap();
        assert_eq!(got, want.into_iter().map(int).collect::<Vec<_>>());
    }

    #[test]
    fn decoupled_at_k0_zero() {
        let h = gauged(&HamiltonianSpec::new(4, int(0)).unwrap());
        assert!(h.is_diagonal());
        assert!(RawHamiltonian::new(&HamiltonianSpec::new(2, int(0)).unwrap()).is_decoupled());
    }

    #[test]
    fn potential_matrix_example() {
        let raw = RawHamiltonian::new(&HamiltonianSpec::new(2, int(1)).unwrap());
        let v = raw.potential_at(&int(1));
        assert_eq!(v, [[int(-10), int(-8)], [int(-8), int(-2)]]);
        assert_eq!(v[0][1], v[1][0]);
    }

    #[test]
    fn c_and_k0_round_trip() {
        let s = HamiltonianSpec::from_c(2, int(1)).unwrap();
        assert_eq!(s.k0, rat(-1, 8));
        assert_eq!(s.c_spec(), int(1));
        assert!(HamiltonianSpec::new(1, int(0)).is_err());
    }

    #[test]
    fn leakage_is_empty_symbolically() {
        for n in 2..=8 {
            assert!(restrict(&gauged_symbolic(n), &module_for(n)).preserves());
        }
    }

    #[test]
    fn reflection_symmetry_and_hook() {
        for n in 2..=6 {
            let r = reflection_check(n).unwrap();
            assert!(r.holds() && r.char_poly_even, "{r:?}");
        }
        let r = reflection_check_with_hook(3, &rat(1, 3)).unwrap();
        assert!(!r.holds());
        assert!(!r.char_poly_even);
    }
}
