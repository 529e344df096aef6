//! Sparse chains of the double complex: boundary, chain-level star,
//! the volume (double) chain and the chain-cochain pairing.
//!
//! Chains appear only on verification paths (Green formula, adjointness
//! oracles), so they are stored sparsely; the hot-path cochains in
//! [`crate::form`] are dense.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::error::Error;
use crate::form::{ComplexCopy, Form};
use crate::lattice::{DirectionSet, LatticeSpec, SiteIndex};
use crate::scalar::Scalar;
use crate::Result;

/// One basis element of C(4) or C̃(4): a site, the slots carrying edges,
/// and which copy of the double complex it belongs to.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ChainBasis {
    pub copy: ComplexCopy,
    pub site: SiteIndex,
    pub dirs: DirectionSet,
}

impl ChainBasis {
    pub fn plain(site: SiteIndex, dirs: DirectionSet) -> Self {
        Self {
            copy: ComplexCopy::Plain,
            site,
            dirs,
        }
    }

    pub fn tilde(site: SiteIndex, dirs: DirectionSet) -> Self {
        Self {
            copy: ComplexCopy::Tilde,
            site,
            dirs,
        }
    }

    pub fn degree(self) -> usize {
        self.dirs.degree()
    }
}

/// Real-coefficient sparse chain. Stored coefficients are nonzero and the
/// key order is canonical, so reductions are reproducible.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct Chain<S: Scalar> {
    terms: BTreeMap<ChainBasis, S>,
}

impl<S: Scalar> Chain<S> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(basis: ChainBasis) -> Self {
        let mut c = Self::zero();
        c.add_term(basis, S::one());
        c
    }

    pub fn add_term(&mut self, basis: ChainBasis, coeff: S) {
        let entry = self.terms.entry(basis).or_insert_with(S::zero);
        *entry += coeff;
        if *entry == S::zero() {
            self.terms.remove(&basis);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ChainBasis, &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_abs_coeff(&self) -> S {
        self.terms
            .values()
            .fold(S::zero(), |acc, c| acc.max(c.abs()))
    }

    /// Degree tag if the chain is homogeneous; `None` for mixed or zero.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degrees = self.terms.keys().map(|b| b.degree());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }
}

/// Boundary of a 1D tensor factor, spread across the four slots: an edge
/// along each axis of `dirs` contributes its two endpoint faces, with the
/// interchange sign from the edge factors preceding it.
fn boundary_basis(basis: ChainBasis) -> Vec<(ChainBasis, i64)> {
    let mut faces = Vec::new();
    for axis in basis.dirs.axes() {
        let sign = basis.dirs.insertion_sign(axis) as i64;
        let dirs = basis.dirs.without(axis);
        faces.push((
            ChainBasis {
                site: basis.site.shifted(axis),
                dirs,
                ..basis
            },
            sign,
        ));
        faces.push((
            ChainBasis {
                site: basis.site,
                dirs,
                ..basis
            },
            -sign,
        ));
    }
    faces
}

/// Boundary operator. Sites wrap modulo the extents in periodic mode
/// (modular identification); in ghost mode shifted sites are kept raw.
pub fn boundary<S: Scalar>(chain: &Chain<S>, lattice: &LatticeSpec) -> Chain<S> {
    let mut out = Chain::zero();
    for (&basis, &coeff) in chain.terms() {
        for (face, sign) in boundary_basis(basis) {
            let face = ChainBasis {
                site: lattice.canonicalize(face.site),
                ..face
            };
            out.add_term(face, coeff * S::from_int(sign));
        }
    }
    out
}

/// Chain-level star: swaps the copy, complements the direction set and
/// multiplies by the Levi-Civita sign of the input set.
pub fn star_c<S: Scalar>(chain: &Chain<S>) -> Chain<S> {
    let mut out = Chain::zero();
    for (&basis, &coeff) in chain.terms() {
        let sign = S::from_int(basis.dirs.levi_civita() as i64);
        out.add_term(
            ChainBasis {
                copy: basis.copy.flipped(),
                site: basis.site,
                dirs: basis.dirs.complement(),
            },
            coeff * sign,
        );
    }
    out
}

/// The volume chain: coefficient 1 on every 4-dimensional basis element of
/// the volume region.
pub fn build_volume<S: Scalar>(lattice: &LatticeSpec) -> Chain<S> {
    let mut out = Chain::zero();
    for site in lattice.volume_sites() {
        out.add_term(ChainBasis::plain(site, DirectionSet::FULL), S::one());
    }
    out
}

/// Sparse element of C(4) ⊗ C̃(4): first factor plain, second tilde.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct DoubleChain<S: Scalar> {
    terms: BTreeMap<(ChainBasis, ChainBasis), S>,
}

impl<S: Scalar> DoubleChain<S> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, plain: ChainBasis, tilde: ChainBasis, coeff: S) {
        assert_eq!(plain.copy, ComplexCopy::Plain);
        assert_eq!(tilde.copy, ComplexCopy::Tilde);
        let entry = self.terms.entry((plain, tilde)).or_insert_with(S::zero);
        *entry += coeff;
        if *entry == S::zero() {
            self.terms.remove(&(plain, tilde));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(ChainBasis, ChainBasis), &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Degree-r layer of the volume double chain: one term s ⊗ ∗ᶜs per volume
/// site and degree-r direction set, the star sign carried on the tilde side.
pub fn build_v_r<S: Scalar>(lattice: &LatticeSpec, degree: usize) -> DoubleChain<S> {
    let mut out = DoubleChain::zero();
    for site in lattice.volume_sites() {
        for dirs in DirectionSet::all_of_degree(degree) {
            out.add_term(
                ChainBasis::plain(site, dirs),
                ChainBasis::tilde(site, dirs.complement()),
                S::from_int(dirs.levi_civita() as i64),
            );
        }
    }
    out
}

/// The full volume double chain, all degrees.
pub fn build_v_full<S: Scalar>(lattice: &LatticeSpec) -> DoubleChain<S> {
    let mut out = DoubleChain::zero();
    for degree in 0..=4 {
        for (&(a, b), &c) in build_v_r::<S>(lattice, degree).terms() {
            out.add_term(a, b, c);
        }
    }
    out
}

/// Boundary on the double complex: ∂(a⊗b) = ∂a⊗b + (−1)^{deg a} a⊗∂b.
/// Sites wrap in periodic mode, as in [`boundary`].
pub fn boundary_double<S: Scalar>(
    double: &DoubleChain<S>,
    lattice: &LatticeSpec,
) -> DoubleChain<S> {
    let mut out = DoubleChain::zero();
    for (&(a, b), &coeff) in double.terms() {
        for (face, sign) in boundary_basis(a) {
            let face = ChainBasis {
                site: lattice.canonicalize(face.site),
                ..face
            };
            out.add_term(face, b, coeff * S::from_int(sign));
        }
        let parity = if a.degree() % 2 == 0 { 1 } else { -1 };
        for (face, sign) in boundary_basis(b) {
            let face = ChainBasis {
                site: lattice.canonicalize(face.site),
                ..face
            };
            out.add_term(a, face, coeff * S::from_int(parity * sign));
        }
    }
    out
}

/// Pairing of one basis element against a form: the matching coefficient,
/// zero for degree mismatch or sites outside storage.
fn pair_basis<S: Scalar>(basis: ChainBasis, form: &Form<S>) -> Complex<S> {
    if basis.degree() != form.degree() {
        return Complex::new(S::zero(), S::zero());
    }
    form.get_or_zero(basis.site, basis.dirs)
}

/// Chain-cochain pairing, extended bilinearly. Vanishes on mismatched
/// degrees; mismatched copies are a domain error.
pub fn pair<S: Scalar>(chain: &Chain<S>, form: &Form<S>) -> Result<Complex<S>> {
    let mut total = Complex::new(S::zero(), S::zero());
    for (&basis, &coeff) in chain.terms() {
        if basis.copy != form.copy() {
            return Err(Error::CopyMismatch {
                expected: form.copy().name(),
                got: basis.copy.name(),
            });
        }
        total += pair_basis(basis, form) * Complex::new(coeff, S::zero());
    }
    Ok(total)
}

/// Pairing of a double chain against a pair of forms:
/// ⟨a⊗b, φ⊗ψ⟩ = ⟨a,φ⟩⟨b,ψ⟩, extended bilinearly. The first form must be
/// in the plain copy and the second in the tilde copy.
pub fn pair_double<S: Scalar>(
    double: &DoubleChain<S>,
    phi: &Form<S>,
    psi: &Form<S>,
) -> Result<Complex<S>> {
    if phi.copy() != ComplexCopy::Plain {
        return Err(Error::CopyMismatch {
            expected: "plain",
            got: phi.copy().name(),
        });
    }
    if psi.copy() != ComplexCopy::Tilde {
        return Err(Error::CopyMismatch {
            expected: "tilde",
            got: psi.copy().name(),
        });
    }
    let mut total = Complex::new(S::zero(), S::zero());
    for (&(a, b), &coeff) in double.terms() {
        let left = pair_basis(a, phi);
        if left.norm_sqr() == S::zero() {
            continue;
        }
        let right = pair_basis(b, psi);
        total += left * right * Complex::new(coeff, S::zero());
    }
    Ok(total)
}
