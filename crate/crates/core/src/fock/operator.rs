use num_complex::Complex;

use crate::linalg::CMatrix;
use crate::scalar::Scalar;

/// Single-mode operators realised on a truncated Fock space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorKind<T> {
    Annihilate,
    Create,
    Number,
    /// `X = a + a†`
    X,
    /// `P = (a - a†)/i`
    P,
    /// `X_θ = X cos θ + P sin θ`; `P_θ` is `X_{θ+π/2}`.
    Quadrature(T),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeOperator<T> {
    pub kind: OperatorKind<T>,
    pub matrix: CMatrix<T>,
}

impl<T: Scalar> ModeOperator<T> {
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

fn annihilation<T: Scalar>(dim: usize) -> CMatrix<T> {
    CMatrix::from_fn(dim, |i, j| {
        if j == i + 1 {
            Complex::new(T::from_usize_lossy(j).sqrt(), T::zero())
        } else {
            Complex::new(T::zero(), T::zero())
        }
    })
}

/// Truncated matrix of `kind` on `dim` levels. Only the last row/column
/// differs from the infinite-dimensional operator.
pub fn operator_matrix<T: Scalar>(kind: OperatorKind<T>, dim: usize) -> ModeOperator<T> {
    let a = annihilation::<T>(dim);
    let i = Complex::new(T::zero(), T::one());
    let matrix = match kind {
        OperatorKind::Annihilate => a,
        OperatorKind::Create => a.dagger(),
        OperatorKind::Number => {
            CMatrix::diagonal(&(0..dim).map(T::from_usize_lossy).collect::<Vec<_>>())
        }
        OperatorKind::X => &a + &a.dagger(),
        OperatorKind::P => (&a - &a.dagger()).scale(i.inv()),
        OperatorKind::Quadrature(theta) => {
            // a e^{-iθ} + a† e^{iθ}
            let phase = Complex::from_polar(T::one(), -theta);
            &a.scale(phase) + &a.dagger().scale(phase.conj())
        }
    };
    ModeOperator { kind, matrix }
}

/// Exact matrix elements of `kind^power` between levels `< dim`, obtained by
/// multiplying on a cutoff with `power` levels of headroom.
pub fn operator_power_block<T: Scalar>(
    kind: OperatorKind<T>,
    power: usize,
    dim: usize,
) -> CMatrix<T> {
    let big = operator_matrix(kind, dim + power + 1).matrix;
    big.pow(power).block(dim)
}

fn reduced_deviation<T: Scalar>(n: usize, dim: usize, on_p: bool) -> T {
    assert!(n >= 1);
    let x = operator_matrix::<T>(OperatorKind::X, dim).matrix;
    let p = operator_matrix::<T>(OperatorKind::P, dim).matrix;
    let number = operator_matrix::<T>(OperatorKind::Number, dim).matrix;
    let i = Complex::new(T::zero(), T::one());
    let (q, other, sign) = if on_p { (&p, &x, T::one()) } else { (&x, &p, -T::one()) };

    let lhs = number.commutator(&q.pow(n));
    let rhs = if n == 1 {
        // [n,P] = iX, [n,X] = -iP
        other.scale(i * sign)
    } else {
        // P-form: iN P^{N-2}(PX + (N-1)i); X-form: -iN X^{N-2}(XP - (N-1)i)
        let shift = CMatrix::identity(dim)
            .scale(i * sign * T::from_usize_lossy(n - 1));
        let inner = &(q * other) + &shift;
        (&q.pow(n - 2) * &inner).scale(i * sign * T::from_usize_lossy(n))
    };
    let size = dim - n;
    let scale = lhs
        .block(size)
        .as_slice()
        .iter()
        .fold(T::one(), |m, z| m.max(z.norm()));
    lhs.max_abs_diff_block(&rhs, size) / scale
}

/// Largest entrywise gap between `[n, P^N]` and `iN P^{N-2}[PX + (N-1)i]`
/// over the block unaffected by truncation, relative to the largest entry.
pub fn commutator_check<T: Scalar>(n: usize, dim: usize) -> T {
    reduced_deviation(n, dim, true)
}

/// As [`commutator_check`] for `[n, X^N] = -iN X^{N-2}[XP - (N-1)i]`.
pub fn commutator_check_x<T: Scalar>(n: usize, dim: usize) -> T {
    reduced_deviation(n, dim, false)
}
