//! Lattice geometry: sites, direction sets, sign tables and shifts.
//!
//! A basis cell of the 4D cubical complex is a tensor product of four
//! 1D factors, each either a point or an edge. The [`DirectionSet`] records
//! which of the four slots carry an edge; together with a [`SiteIndex`] it
//! identifies one basis cell.

use crate::error::Error;
use crate::Result;

/// Number of lattice axes. Axis 0 is the time direction.
pub const DIM: usize = 4;

/// Total number of channels per site across all degrees: 1+4+6+4+1.
pub const NUM_CHANNELS: usize = 16;

/// Channel layout, degree-major, lexicographic within each degree:
/// deg 0, then axes 0..3, then 01,02,03,12,13,23, then 012,013,023,123,
/// then 0123. Index = flat channel, value = axis bitmask.
const CHANNEL_MASKS: [u8; NUM_CHANNELS] = [
    0b0000, // x
    0b0001, 0b0010, 0b0100, 0b1000, // e0 e1 e2 e3
    0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100, // e01 e02 e03 e12 e13 e23
    0b0111, 0b1011, 0b1101, 0b1110, // e012 e013 e023 e123
    0b1111, // e0123
];

/// Inverse of `CHANNEL_MASKS`: bitmask -> flat channel.
const MASK_CHANNELS: [usize; 16] = {
    let mut inv = [0usize; 16];
    let mut c = 0;
    while c < NUM_CHANNELS {
        inv[CHANNEL_MASKS[c] as usize] = c;
        c += 1;
    }
    inv
};

/// First flat channel of each degree.
pub const DEGREE_OFFSET: [usize; 6] = [0, 1, 5, 11, 15, 16];

/// Which of the four tensor slots carry an edge. Degree = cardinality.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DirectionSet(u8);

impl DirectionSet {
    pub const EMPTY: Self = Self(0);
    pub const FULL: Self = Self(0b1111);

    pub fn from_mask(mask: u8) -> Self {
        assert!(mask < 16, "direction mask out of range");
        Self(mask)
    }

    pub fn from_axes(axes: &[usize]) -> Self {
        let mut mask = 0u8;
        for &a in axes {
            assert!(a < DIM, "axis out of range");
            mask |= 1 << a;
        }
        Self(mask)
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, axis: usize) -> bool {
        self.0 >> axis & 1 == 1
    }

    pub fn with(self, axis: usize) -> Self {
        Self(self.0 | 1 << axis)
    }

    pub fn without(self, axis: usize) -> Self {
        Self(self.0 & !(1 << axis))
    }

    pub fn complement(self) -> Self {
        Self(!self.0 & 0b1111)
    }

    pub fn axes(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..DIM).filter(move |a| mask >> a & 1 == 1)
    }

    /// Flat channel in 0..16, degree-major.
    pub fn channel(self) -> usize {
        MASK_CHANNELS[self.0 as usize]
    }

    pub fn from_channel(channel: usize) -> Self {
        Self(CHANNEL_MASKS[channel])
    }

    /// Position in lexicographic order among sets of the same degree.
    pub fn rank(self) -> usize {
        self.channel() - DEGREE_OFFSET[self.degree()]
    }

    pub fn by_degree_rank(degree: usize, rank: usize) -> Self {
        assert!(rank < channels_of_degree(degree));
        Self::from_channel(DEGREE_OFFSET[degree] + rank)
    }

    pub fn all_of_degree(degree: usize) -> impl Iterator<Item = Self> {
        (0..channels_of_degree(degree)).map(move |r| Self::by_degree_rank(degree, r))
    }

    pub fn all() -> impl Iterator<Item = Self> {
        (0..NUM_CHANNELS).map(Self::from_channel)
    }

    /// Sign of the permutation (members, complement) of (0,1,2,3).
    /// The empty set and the full set both give +1 (identity permutation).
    pub fn levi_civita(self) -> i8 {
        permutation_sign(self, self.complement())
    }

    /// Sign of the permutation (complement, members) of (0,1,2,3).
    pub fn levi_civita_prime(self) -> i8 {
        permutation_sign(self.complement(), self)
    }

    /// Lorentz-signature sign: -1 iff the time slot carries an edge.
    pub fn time_sign(self) -> i8 {
        if self.contains(0) {
            -1
        } else {
            1
        }
    }

    /// Sign `(-1)^{#{j in set : j < axis}}` picked up when an edge factor
    /// along `axis` is inserted past the leading edge factors of this set.
    pub fn insertion_sign(self, axis: usize) -> i8 {
        let below = (self.0 & ((1u8 << axis) - 1)).count_ones();
        if below % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl std::fmt::Debug for DirectionSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0 == 0 {
            return write!(f, "x");
        }
        write!(f, "e")?;
        for a in self.axes() {
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

fn permutation_sign(first: DirectionSet, second: DirectionSet) -> i8 {
    let perm: Vec<usize> = first.axes().chain(second.axes()).collect();
    debug_assert_eq!(perm.len(), DIM);
    let mut sign = 1i8;
    for i in 0..DIM {
        for j in i + 1..DIM {
            if perm[i] > perm[j] {
                sign = -sign;
            }
        }
    }
    sign
}

pub fn channels_of_degree(degree: usize) -> usize {
    [1, 4, 6, 4, 1][degree]
}

/// Lattice coordinates of a site. Coordinates are 0-based internally; in
/// ghost mode they may point into the ghost layer beyond the volume.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SiteIndex(pub [i64; 4]);

impl SiteIndex {
    pub const ORIGIN: Self = Self([0; 4]);

    /// Raw (unwrapped) shift by +1 along `axis`.
    pub fn shifted(self, axis: usize) -> Self {
        let mut k = self.0;
        k[axis] += 1;
        Self(k)
    }
}

/// Boundary closure of the finite lattice.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BoundaryMode {
    /// Site arithmetic modulo the extents; every operator is an endomorphism.
    Periodic,
    /// One or more extra storage layers per axis; forward differences read
    /// into the ghost layer and outputs are defined on the inner region.
    Ghost { margin: usize },
}

/// Finite 4D lattice: extents of the volume region plus boundary closure.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LatticeSpec {
    pub extents: [usize; 4],
    pub boundary: BoundaryMode,
}

impl LatticeSpec {
    pub fn periodic(extents: [usize; 4]) -> Self {
        assert!(extents.iter().all(|&n| n >= 1), "extents must be positive");
        Self {
            extents,
            boundary: BoundaryMode::Periodic,
        }
    }

    pub fn ghost(extents: [usize; 4], margin: usize) -> Self {
        assert!(extents.iter().all(|&n| n >= 1), "extents must be positive");
        assert!(margin >= 1, "ghost margin must be at least 1");
        Self {
            extents,
            boundary: BoundaryMode::Ghost { margin },
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.boundary, BoundaryMode::Periodic)
    }

    /// Storage extent along one axis (volume plus ghost layer).
    pub fn storage_extent(&self, axis: usize) -> usize {
        match self.boundary {
            BoundaryMode::Periodic => self.extents[axis],
            BoundaryMode::Ghost { margin } => self.extents[axis] + margin,
        }
    }

    pub fn num_storage_sites(&self) -> usize {
        (0..DIM).map(|a| self.storage_extent(a)).product()
    }

    pub fn num_volume_sites(&self) -> usize {
        self.extents.iter().product()
    }

    pub fn in_storage(&self, site: SiteIndex) -> bool {
        (0..DIM).all(|a| site.0[a] >= 0 && (site.0[a] as usize) < self.storage_extent(a))
    }

    pub fn in_volume(&self, site: SiteIndex) -> bool {
        (0..DIM).all(|a| site.0[a] >= 0 && (site.0[a] as usize) < self.extents[a])
    }

    /// Site-major rank of a storage site, axis 0 most significant.
    pub fn site_rank(&self, site: SiteIndex) -> usize {
        debug_assert!(self.in_storage(site));
        let mut rank = 0usize;
        for a in 0..DIM {
            rank = rank * self.storage_extent(a) + site.0[a] as usize;
        }
        rank
    }

    pub fn site_from_rank(&self, mut rank: usize) -> SiteIndex {
        let mut k = [0i64; 4];
        for a in (0..DIM).rev() {
            let n = self.storage_extent(a);
            k[a] = (rank % n) as i64;
            rank /= n;
        }
        SiteIndex(k)
    }

    /// All storage sites in site-major (lexicographic) order.
    pub fn storage_sites(&self) -> impl Iterator<Item = SiteIndex> + '_ {
        (0..self.num_storage_sites()).map(|r| self.site_from_rank(r))
    }

    /// Sites of the volume region V, in lexicographic order.
    pub fn volume_sites(&self) -> impl Iterator<Item = SiteIndex> + '_ {
        let spec = *self;
        self.storage_sites().filter(move |&s| spec.in_volume(s))
    }

    /// Shift by +1 along `axis`: wraps in periodic mode, may land in the
    /// ghost layer in ghost mode; leaving storage is an error there.
    pub fn shift(&self, site: SiteIndex, axis: usize) -> Result<SiteIndex> {
        let mut k = site.0;
        k[axis] += 1;
        match self.boundary {
            BoundaryMode::Periodic => {
                k[axis] = k[axis].rem_euclid(self.extents[axis] as i64);
                Ok(SiteIndex(k))
            }
            BoundaryMode::Ghost { .. } => {
                let shifted = SiteIndex(k);
                if self.in_storage(shifted) {
                    Ok(shifted)
                } else {
                    Err(Error::ShiftOutOfRange {
                        site: site.0,
                        axis,
                    })
                }
            }
        }
    }

    /// Wrap a raw site into storage in periodic mode; identity otherwise.
    pub fn canonicalize(&self, site: SiteIndex) -> SiteIndex {
        match self.boundary {
            BoundaryMode::Periodic => {
                let mut k = site.0;
                for a in 0..DIM {
                    k[a] = k[a].rem_euclid(self.extents[a] as i64);
                }
                SiteIndex(k)
            }
            BoundaryMode::Ghost { .. } => site,
        }
    }
}
