//! The PQRS basis of 2x2 real matrices.
//!
//! With the column-stochastic step matrix
//!
//! ```text
//! A = | a  b |     b = 1 - d,  c = 1 - a
//!     | c  d |
//! ```
//!
//! the one-step operators are `P = [[a, b], [0, 0]]` (move left) and
//! `Q = [[0, 0], [c, d]]` (move right), and two further matrices
//! `R = [[c, d], [0, 0]]`, `S = [[0, 0], [a, b]]` complete a basis whenever
//! `ad - bc != 0`. Products of basis elements are single scaled basis
//! elements, which is what makes path sums tractable.

use std::ops::{Add, Mul};

use crate::error::{Error, Result};
use crate::scalar::Field;

/// Parameters of a correlated random walk.
///
/// `a` is the probability of stepping left again after a left step and `d` the
/// probability of stepping right again after a right step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkParameters<T> {
    a: T,
    d: T,
}

impl<T: Field> WalkParameters<T> {
    /// Builds the walk, requiring `0 < a < 1` and `0 < d < 1`.
    ///
    /// `a + d = 1` is accepted: the walk is then uncorrelated and only the
    /// PQRS-basis operations refuse it.
    pub fn new(a: T, d: T) -> Result<Self> {
        let open_unit = |v: &T| *v > T::zero() && *v < T::one();
        if !open_unit(&a) || !open_unit(&d) {
            return Err(Error::InvalidParameter(format!(
                "a = {a:?} and d = {d:?} must both lie in (0, 1)"
            )));
        }
        Ok(Self { a, d })
    }

    /// The symmetric walk `a = d`.
    pub fn symmetric(a: T) -> Result<Self> {
        Self::new(a.clone(), a)
    }

    pub fn a(&self) -> T {
        self.a.clone()
    }

    pub fn b(&self) -> T {
        T::one() - self.d.clone()
    }

    pub fn c(&self) -> T {
        T::one() - self.a.clone()
    }

    pub fn d(&self) -> T {
        self.d.clone()
    }

    /// `det A = ad - bc = a + d - 1`.
    pub fn delta(&self) -> T {
        self.a() * self.d() - self.b() * self.c()
    }

    /// Ratio `bc / ad`, strictly positive for every valid walk.
    pub fn cluster_ratio(&self) -> T {
        self.b() * self.c() / (self.a() * self.d())
    }

    /// Whether `P, Q, R, S` form a basis.
    pub fn has_pqrs_basis(&self) -> bool {
        !self.delta().is_zero()
    }

    /// Whether `abcd != 0` in this scalar type.
    pub fn is_nondegenerate(&self) -> bool {
        !(self.a() * self.b() * self.c() * self.d()).is_zero()
    }

    /// The step matrix `A = P + Q`.
    pub fn step_matrix(&self) -> RawMatrix2<T> {
        RawMatrix2::new(self.a(), self.b(), self.c(), self.d())
    }

    pub(crate) fn require_basis(&self) -> Result<()> {
        if self.has_pqrs_basis() {
            Ok(())
        } else {
            Err(Error::SingularBasis)
        }
    }
}

/// A plain 2x2 matrix `[[x, y], [z, w]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawMatrix2<T> {
    pub x: T,
    pub y: T,
    pub z: T,
    pub w: T,
}

impl<T: Field> RawMatrix2<T> {
    pub fn new(x: T, y: T, z: T, w: T) -> Self {
        Self { x, y, z, w }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(
            self.x.clone() * s.clone(),
            self.y.clone() * s.clone(),
            self.z.clone() * s.clone(),
            self.w.clone() * s,
        )
    }

    /// `M v` for a column vector `v = [v0, v1]`.
    pub fn apply(&self, v: &[T; 2]) -> [T; 2] {
        [
            self.x.clone() * v[0].clone() + self.y.clone() * v[1].clone(),
            self.z.clone() * v[0].clone() + self.w.clone() * v[1].clone(),
        ]
    }

    /// `1ᵀ M v`: total mass after applying `M` to `v`.
    pub fn mass(&self, v: &[T; 2]) -> T {
        let [u0, u1] = self.apply(v);
        u0 + u1
    }

    /// Both columns sum to one and all entries are nonnegative.
    pub fn is_column_stochastic(&self) -> bool {
        let entries = [&self.x, &self.y, &self.z, &self.w];
        entries.iter().all(|e| **e >= T::zero())
            && (self.x.clone() + self.z.clone()) == T::one()
            && (self.y.clone() + self.w.clone()) == T::one()
    }
}

impl<T: Field> Add for RawMatrix2<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z, self.w + rhs.w)
    }
}

impl<T: Field> Mul for RawMatrix2<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.x.clone() * rhs.x.clone() + self.y.clone() * rhs.z.clone(),
            self.x * rhs.y.clone() + self.y * rhs.w.clone(),
            self.z.clone() * rhs.x + self.w.clone() * rhs.z,
            self.z * rhs.y + self.w * rhs.w,
        )
    }
}

/// One of the four basis matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    P,
    Q,
    R,
    S,
}

impl Basis {
    pub const ALL: [Basis; 4] = [Basis::P, Basis::Q, Basis::R, Basis::S];

    fn index(self) -> usize {
        match self {
            Basis::P => 0,
            Basis::Q => 1,
            Basis::R => 2,
            Basis::S => 3,
        }
    }
}

/// Which walk parameter scales a basis product.
#[derive(Debug, Clone, Copy)]
enum Weight {
    A,
    B,
    C,
    D,
}

/// `PRODUCTS[u][v] = (w, t)` means `U V = w T`.
const PRODUCTS: [[(Weight, Basis); 4]; 4] = {
    use Basis::*;
    use Weight::*;
    [
        [(A, P), (B, R), (A, R), (B, P)],
        [(C, S), (D, Q), (C, Q), (D, S)],
        [(C, P), (D, R), (C, R), (D, P)],
        [(A, S), (B, Q), (A, Q), (B, S)],
    ]
};

/// A 2x2 matrix held as coefficients over `{P, Q, R, S}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PqrsMatrix<T> {
    coeffs: [T; 4],
    params: WalkParameters<T>,
}

impl<T: Field> PqrsMatrix<T> {
    /// `cp P + cq Q + cr R + cs S`.
    pub fn new(cp: T, cq: T, cr: T, cs: T, params: WalkParameters<T>) -> Self {
        Self {
            coeffs: [cp, cq, cr, cs],
            params,
        }
    }

    pub fn zero(params: WalkParameters<T>) -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero(), params)
    }

    /// A single basis element with unit coefficient.
    pub fn basis(which: Basis, params: WalkParameters<T>) -> Self {
        let mut m = Self::zero(params);
        m.coeffs[which.index()] = T::one();
        m
    }

    /// The identity, `(dP + aQ - bR - cS) / (ad - bc)`.
    pub fn identity(params: WalkParameters<T>) -> Result<Self> {
        params.require_basis()?;
        let delta = params.delta();
        Ok(Self::new(
            params.d() / delta.clone(),
            params.a() / delta.clone(),
            (T::zero() - params.b()) / delta.clone(),
            (T::zero() - params.c()) / delta,
            params,
        ))
    }

    pub fn cp(&self) -> T {
        self.coeffs[0].clone()
    }

    pub fn cq(&self) -> T {
        self.coeffs[1].clone()
    }

    pub fn cr(&self) -> T {
        self.coeffs[2].clone()
    }

    pub fn cs(&self) -> T {
        self.coeffs[3].clone()
    }

    pub fn coeff(&self, which: Basis) -> T {
        self.coeffs[which.index()].clone()
    }

    pub fn coefficients(&self) -> &[T; 4] {
        &self.coeffs
    }

    pub fn params(&self) -> &WalkParameters<T> {
        &self.params
    }

    /// Writes a raw matrix in the PQRS basis.
    ///
    /// ```text
    /// X = ((dx - cy) P + (aw - bz) Q + (ay - bx) R + (dz - cw) S) / (ad - bc)
    /// ```
    pub fn decompose(m: &RawMatrix2<T>, params: WalkParameters<T>) -> Result<Self> {
        params.require_basis()?;
        let (a, b, c, d) = (params.a(), params.b(), params.c(), params.d());
        let delta = params.delta();
        let RawMatrix2 { x, y, z, w } = m.clone();
        Ok(Self::new(
            (d.clone() * x.clone() - c.clone() * y.clone()) / delta.clone(),
            (a.clone() * w.clone() - b.clone() * z.clone()) / delta.clone(),
            (a * y - b * x) / delta.clone(),
            (d * z - c * w) / delta,
            params,
        ))
    }

    /// Back to a raw matrix.
    pub fn compose(&self) -> RawMatrix2<T> {
        let p = &self.params;
        let [cp, cq, cr, cs] = self.coeffs.clone();
        // P and R fill the top row, Q and S the bottom row.
        RawMatrix2::new(
            cp.clone() * p.a() + cr.clone() * p.c(),
            cp * p.b() + cr * p.d(),
            cq.clone() * p.c() + cs.clone() * p.a(),
            cq * p.d() + cs * p.b(),
        )
    }

    /// Product through the basis multiplication table.
    pub fn multiply(&self, rhs: &Self) -> Result<Self> {
        self.check_same_basis(rhs)?;
        let weights = [
            self.params.a(),
            self.params.b(),
            self.params.c(),
            self.params.d(),
        ];
        let mut out: [T; 4] = [T::zero(), T::zero(), T::zero(), T::zero()];
        for (u, lhs_coeff) in self.coeffs.iter().enumerate() {
            if lhs_coeff.is_zero() {
                continue;
            }
            for (v, rhs_coeff) in rhs.coeffs.iter().enumerate() {
                if rhs_coeff.is_zero() {
                    continue;
                }
                let (weight, target) = PRODUCTS[u][v];
                let w = weights[weight as usize].clone();
                let slot = &mut out[target.index()];
                *slot = slot.clone() + lhs_coeff.clone() * rhs_coeff.clone() * w;
            }
        }
        Ok(Self {
            coeffs: out,
            params: self.params.clone(),
        })
    }

    /// Coefficientwise sum.
    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.check_same_basis(rhs)?;
        let mut coeffs = self.coeffs.clone();
        for (slot, r) in coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *slot = slot.clone() + r.clone();
        }
        Ok(Self {
            coeffs,
            params: self.params.clone(),
        })
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c = c.clone() * s.clone();
        }
        out
    }

    fn check_same_basis(&self, rhs: &Self) -> Result<()> {
        if self.params == rhs.params {
            Ok(())
        } else {
            Err(Error::MismatchedBasis)
        }
    }
}

/// `k`-th power of a basis element, `U^k = w^(k-1) U` on the diagonal of the
/// multiplication table.
pub fn basis_power<T: Field>(which: Basis, k: u64, params: WalkParameters<T>) -> PqrsMatrix<T> {
    assert!(k >= 1, "basis_power needs k >= 1");
    let w = match which {
        Basis::P => params.a(),
        Basis::Q => params.d(),
        Basis::R => params.c(),
        Basis::S => params.b(),
    };
    let scale = num_traits::pow(w, (k - 1) as usize);
    PqrsMatrix::basis(which, params).scale(scale)
}
