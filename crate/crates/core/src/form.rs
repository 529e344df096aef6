//! Dense complex cochains (discrete forms) over a lattice.

use num_complex::Complex;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::lattice::{channels_of_degree, DirectionSet, LatticeSpec, SiteIndex};
use crate::scalar::Scalar;

/// Which copy of the double complex a form (or chain) lives in.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ComplexCopy {
    Plain,
    Tilde,
}

impl ComplexCopy {
    pub fn flipped(self) -> Self {
        match self {
            ComplexCopy::Plain => ComplexCopy::Tilde,
            ComplexCopy::Tilde => ComplexCopy::Plain,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ComplexCopy::Plain => "plain",
            ComplexCopy::Tilde => "tilde",
        }
    }
}

/// A homogeneous degree-r cochain: one complex coefficient per
/// (storage site, direction set of degree r).
#[derive(Clone, PartialEq, Debug)]
pub struct Form<S: Scalar> {
    degree: usize,
    copy: ComplexCopy,
    lattice: LatticeSpec,
    /// Indexed `site_rank * channels + dirs.rank()`.
    coeffs: Vec<Complex<S>>,
}

impl<S: Scalar> Form<S> {
    pub fn zero(lattice: LatticeSpec, degree: usize, copy: ComplexCopy) -> Self {
        assert!(degree <= 4);
        let len = lattice.num_storage_sites() * channels_of_degree(degree);
        Self {
            degree,
            copy,
            lattice,
            coeffs: vec![Complex::new(S::zero(), S::zero()); len],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn copy(&self) -> ComplexCopy {
        self.copy
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn channels(&self) -> usize {
        channels_of_degree(self.degree)
    }

    fn index(&self, site: SiteIndex, dirs: DirectionSet) -> usize {
        debug_assert_eq!(dirs.degree(), self.degree);
        self.lattice.site_rank(site) * self.channels() + dirs.rank()
    }

    pub fn get(&self, site: SiteIndex, dirs: DirectionSet) -> Complex<S> {
        self.coeffs[self.index(site, dirs)]
    }

    /// Coefficient at a raw site, zero outside storage.
    pub fn get_or_zero(&self, site: SiteIndex, dirs: DirectionSet) -> Complex<S> {
        let site = self.lattice.canonicalize(site);
        if self.lattice.in_storage(site) {
            self.get(site, dirs)
        } else {
            Complex::new(S::zero(), S::zero())
        }
    }

    pub fn set(&mut self, site: SiteIndex, dirs: DirectionSet, value: Complex<S>) {
        let idx = self.index(site, dirs);
        self.coeffs[idx] = value;
    }

    pub fn add_assign_at(&mut self, site: SiteIndex, dirs: DirectionSet, value: Complex<S>) {
        let idx = self.index(site, dirs);
        self.coeffs[idx] += value;
    }

    pub fn coeffs(&self) -> &[Complex<S>] {
        &self.coeffs
    }

    pub fn map_coeffs(mut self, f: impl Fn(Complex<S>) -> Complex<S>) -> Self {
        for c in &mut self.coeffs {
            *c = f(*c);
        }
        self
    }

    pub fn conjugated(&self) -> Self {
        self.clone().map_coeffs(|c| c.conj())
    }

    pub fn scaled(&self, factor: Complex<S>) -> Self {
        self.clone().map_coeffs(|c| c * factor)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm_sqr() == S::zero())
    }

    /// Euclidean norm over all channels and storage sites.
    pub fn euclidean_norm(&self) -> S {
        self.coeffs
            .iter()
            .fold(S::zero(), |acc, c| acc + c.norm_sqr())
            .sqrt()
    }

    /// Largest coefficient modulus of the difference, over all storage sites.
    pub fn max_abs_diff(&self, other: &Self) -> S {
        assert_eq!(self.degree, other.degree);
        assert_eq!(self.lattice, other.lattice);
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(S::zero(), |acc, (a, b)| acc.max((a - b).norm()))
    }

    pub fn try_add(&self, other: &Self) -> crate::Result<Self> {
        if self.copy != other.copy {
            return Err(crate::Error::CopyMismatch {
                expected: self.copy.name(),
                got: other.copy.name(),
            });
        }
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (c, o) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *c += *o;
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> crate::Result<Self> {
        self.try_add(&other.scaled(Complex::new(-S::one(), S::zero())))
    }

    /// Re-tag this form as the other copy, coefficients unchanged.
    pub fn with_copy(mut self, copy: ComplexCopy) -> Self {
        self.copy = copy;
        self
    }

    /// Seeded random form: independent channels, real and imaginary parts
    /// uniform in [-1, 1], filled in site-major then channel order.
    pub fn random(lattice: LatticeSpec, degree: usize, copy: ComplexCopy, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut form = Self::zero(lattice, degree, copy);
        for c in &mut form.coeffs {
            let re = S::from_f64(rng.gen_range(-1.0..=1.0)).unwrap();
            let im = S::from_f64(rng.gen_range(-1.0..=1.0)).unwrap();
            *c = Complex::new(re, im);
        }
        form
    }
}

/// The quintuple (ω⁰,…,ω⁴): 16 complex channels per site.
#[derive(Clone, PartialEq, Debug)]
pub struct InhomogeneousForm<S: Scalar> {
    parts: [Form<S>; 5],
}

impl<S: Scalar> InhomogeneousForm<S> {
    pub fn zero(lattice: LatticeSpec, copy: ComplexCopy) -> Self {
        Self {
            parts: std::array::from_fn(|r| Form::zero(lattice, r, copy)),
        }
    }

    pub fn from_parts(parts: [Form<S>; 5]) -> Self {
        let lattice = *parts[0].lattice();
        let copy = parts[0].copy();
        for (r, p) in parts.iter().enumerate() {
            assert_eq!(p.degree(), r);
            assert_eq!(*p.lattice(), lattice);
            assert_eq!(p.copy(), copy);
        }
        Self { parts }
    }

    pub fn part(&self, degree: usize) -> &Form<S> {
        &self.parts[degree]
    }

    pub fn part_mut(&mut self, degree: usize) -> &mut Form<S> {
        &mut self.parts[degree]
    }

    pub fn parts(&self) -> &[Form<S>; 5] {
        &self.parts
    }

    pub fn into_parts(self) -> [Form<S>; 5] {
        self.parts
    }

    pub fn lattice(&self) -> &LatticeSpec {
        self.parts[0].lattice()
    }

    pub fn copy(&self) -> ComplexCopy {
        self.parts[0].copy()
    }

    pub fn map_parts(&self, f: impl Fn(usize, &Form<S>) -> Form<S>) -> Self {
        Self::from_parts(std::array::from_fn(|r| {
            let out = f(r, &self.parts[r]);
            assert_eq!(out.degree(), r);
            out
        }))
    }

    pub fn try_add(&self, other: &Self) -> crate::Result<Self> {
        let mut parts = Vec::with_capacity(5);
        for r in 0..5 {
            parts.push(self.parts[r].try_add(&other.parts[r])?);
        }
        Ok(Self::from_parts(parts.try_into().unwrap()))
    }

    pub fn try_sub(&self, other: &Self) -> crate::Result<Self> {
        self.try_add(&other.scaled(Complex::new(-S::one(), S::zero())))
    }

    pub fn scaled(&self, factor: Complex<S>) -> Self {
        self.map_parts(|_, p| p.scaled(factor))
    }

    pub fn euclidean_norm(&self) -> S {
        self.parts
            .iter()
            .fold(S::zero(), |acc, p| {
                acc + p
                    .coeffs()
                    .iter()
                    .fold(S::zero(), |a, c| a + c.norm_sqr())
            })
            .sqrt()
    }

    pub fn random(lattice: LatticeSpec, copy: ComplexCopy, seed: u64) -> Self {
        Self::from_parts(std::array::from_fn(|r| {
            Form::random(lattice, r, copy, seed.wrapping_add(r as u64))
        }))
    }
}
