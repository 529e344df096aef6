//! The Dirac–Kähler operator i(d^c + δ^c) on inhomogeneous forms, the
//! chirality star ⋆ = i∗B, the chiral projectors and the self-duality
//! predicates.

use num_complex::Complex;

use crate::calculus::{coboundary, codifferential, hodge, iota};
use crate::form::{Form, InhomogeneousForm};
use crate::scalar::Scalar;

/// Sign (−1)^{r(r−1)/2} of the main antiautomorphism B on degree r.
pub fn antiautomorphism_sign(degree: usize) -> i8 {
    if (degree * (degree.wrapping_sub(1)) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The main antiautomorphism B: each homogeneous part scaled by
/// (−1)^{r(r−1)/2}.
pub fn antiautomorphism_b<S: Scalar>(omega: &InhomogeneousForm<S>) -> InhomogeneousForm<S> {
    omega.map_parts(|r, part| {
        part.scaled(Complex::new(
            S::from_int(antiautomorphism_sign(r) as i64),
            S::zero(),
        ))
    })
}

/// The chirality star ⋆Ω = i ∗ BΩ, an involution that swaps the copies.
pub fn chiral_star<S: Scalar>(omega: &InhomogeneousForm<S>) -> InhomogeneousForm<S> {
    let mut out = InhomogeneousForm::zero(*omega.lattice(), omega.copy().flipped());
    for r in 0..=4usize {
        let factor = Complex::new(S::zero(), S::from_int(antiautomorphism_sign(r) as i64));
        *out.part_mut(4 - r) = hodge(omega.part(r)).scaled(factor);
    }
    out
}

/// The copy-preserving chirality operator ι̃⋆. Squares to the identity;
/// its ±1 eigenspaces are the self-dual and anti-self-dual forms.
pub fn iota_chiral_star<S: Scalar>(omega: &InhomogeneousForm<S>) -> InhomogeneousForm<S> {
    chiral_star(omega).map_parts(|_, part| iota(part))
}

/// The Dirac–Kähler operator DΩ = i(d^c + δ^c)Ω, assembled degree by
/// degree: the r-th output part is i(d^c ω^{r−1} + δ^c ω^{r+1}).
pub fn dirac_kahler<S: Scalar>(omega: &InhomogeneousForm<S>) -> InhomogeneousForm<S> {
    let unit = Complex::new(S::zero(), S::one());
    let mut out = InhomogeneousForm::zero(*omega.lattice(), omega.copy());
    for r in 0..=4usize {
        let mut acc = Form::zero(*omega.lattice(), r, omega.copy());
        if r >= 1 {
            acc = acc.try_add(&coboundary(omega.part(r - 1))).expect("same copy");
        }
        if r <= 3 {
            acc = acc
                .try_add(&codifferential(omega.part(r + 1)))
                .expect("same copy");
        }
        *out.part_mut(r) = acc.scaled(unit);
    }
    out
}

/// Euclidean residual ‖DΩ − mΩ‖ of the Dirac–Kähler equation.
pub fn dk_residual<S: Scalar>(omega: &InhomogeneousForm<S>, mass: S) -> S {
    dirac_kahler(omega)
        .try_sub(&omega.scaled(Complex::new(mass, S::zero())))
        .expect("same copy")
        .euclidean_norm()
}

/// Chirality eigenspace label: the ±1 eigenvalue of ι̃⋆.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ChiralSector {
    Plus,
    Minus,
}

impl ChiralSector {
    pub fn sign(self) -> i8 {
        match self {
            ChiralSector::Plus => 1,
            ChiralSector::Minus => -1,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            ChiralSector::Plus => ChiralSector::Minus,
            ChiralSector::Minus => ChiralSector::Plus,
        }
    }
}

/// Chiral projection Ω^± = (Ω ± ι̃⋆Ω)/2.
pub fn chiral_project<S: Scalar>(
    omega: &InhomogeneousForm<S>,
    sector: ChiralSector,
) -> InhomogeneousForm<S> {
    let signed = iota_chiral_star(omega).scaled(Complex::new(
        S::from_int(sector.sign() as i64),
        S::zero(),
    ));
    omega
        .try_add(&signed)
        .expect("same copy")
        .scaled(Complex::new(S::from_f64(0.5).unwrap(), S::zero()))
}

fn duality_residual<S: Scalar>(omega: &InhomogeneousForm<S>, sector: ChiralSector) -> S {
    iota_chiral_star(omega)
        .try_sub(&omega.scaled(Complex::new(S::from_int(sector.sign() as i64), S::zero())))
        .expect("same copy")
        .euclidean_norm()
}

/// Whether ι̃⋆Ω = Ω up to `tol` relative to ‖Ω‖. The zero form counts as
/// both self-dual and anti-self-dual.
pub fn is_self_dual<S: Scalar>(omega: &InhomogeneousForm<S>, tol: S) -> bool {
    let norm = omega.euclidean_norm();
    norm == S::zero() || duality_residual(omega, ChiralSector::Plus) <= tol * norm
}

/// Whether ι̃⋆Ω = −Ω up to `tol` relative to ‖Ω‖.
pub fn is_anti_self_dual<S: Scalar>(omega: &InhomogeneousForm<S>, tol: S) -> bool {
    let norm = omega.euclidean_norm();
    norm == S::zero() || duality_residual(omega, ChiralSector::Minus) <= tol * norm
}

/// Chirality-flip residuals for an eigenpair DΩ = λΩ:
/// (‖DΩ⁺ − λΩ⁻‖, ‖DΩ⁻ − λΩ⁺‖). Both vanish exactly when Ω is an exact
/// eigenform, because D anticommutes with ι̃⋆.
pub fn flip_residuals<S: Scalar>(
    omega: &InhomogeneousForm<S>,
    lambda: Complex<S>,
) -> (S, S) {
    let plus = chiral_project(omega, ChiralSector::Plus);
    let minus = chiral_project(omega, ChiralSector::Minus);
    let r_plus = dirac_kahler(&plus)
        .try_sub(&minus.scaled(lambda))
        .expect("same copy")
        .euclidean_norm();
    let r_minus = dirac_kahler(&minus)
        .try_sub(&plus.scaled(lambda))
        .expect("same copy")
        .euclidean_norm();
    (r_plus, r_minus)
}
