//! Differential operators `Σ c_ij(k0) x^i ∂^j` in normal order, 2x2
//! matrices of them, and their restriction to finite polynomial modules
//! `P(m) ⊕ P(n)`.

mod diffop;
mod matop;
mod module;

use std::ops::{Add, Mul, Sub};

pub use diffop::DiffOp;
pub use matop::MatOp;
pub use module::{restrict, Doublet, Leak, ModuleSpec, RestrictedMatrix};

/// `ab - ba`.
pub fn commutator<T>(a: &T, b: &T) -> T
where
    for<'x> &'x T: Mul<&'x T, Output = T> + Sub<&'x T, Output = T>,
{
    &(a * b) - &(b * a)
}

/// `ab + ba`.
pub fn anticommutator<T>(a: &T, b: &T) -> T
where
    for<'x> &'x T: Mul<&'x T, Output = T> + Add<&'x T, Output = T>,
{
    &(a * b) + &(b * a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d_x_commutator_is_one() {
        assert_eq!(commutator(&DiffOp::d(), &DiffOp::x()), DiffOp::one());
        assert_eq!(commutator(&DiffOp::x(), &DiffOp::d()), -&DiffOp::one());
    }
}
