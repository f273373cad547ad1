use std::cmp::Ordering;
use std::fmt;

/// Exchange statistics of the ladder operators in an expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Statistics {
    Bose,
    Fermi,
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statistics::Bose => write!(f, "bose"),
            Statistics::Fermi => write!(f, "fermi"),
        }
    }
}

/// Periodic lattice of `sites` sites carrying `flavors` modes each.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModeSpace {
    pub sites: usize,
    pub flavors: usize,
}

impl ModeSpace {
    pub fn new(sites: usize, flavors: usize) -> Self {
        assert!(sites > 0 && flavors > 0, "mode space must be non-empty");
        Self { sites, flavors }
    }

    pub fn spinless(sites: usize) -> Self {
        Self::new(sites, 1)
    }

    pub fn modes(&self) -> usize {
        self.sites * self.flavors
    }

    /// Periodic reduction of a signed site index.
    pub fn wrap(&self, site: i64) -> usize {
        site.rem_euclid(self.sites as i64) as usize
    }
}

/// Creation (`dagger`) or annihilation operator on one mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LadderOp {
    pub dagger: bool,
    pub site: usize,
    pub flavor: usize,
}

impl LadderOp {
    pub fn annihilator(space: &ModeSpace, site: i64, flavor: usize) -> Self {
        Self { dagger: false, site: space.wrap(site), flavor }
    }

    pub fn creator(space: &ModeSpace, site: i64, flavor: usize) -> Self {
        Self { dagger: true, site: space.wrap(site), flavor }
    }

    pub fn same_mode(&self, other: &LadderOp) -> bool {
        self.site == other.site && self.flavor == other.flavor
    }

    /// Two factors can be swapped freely (up to a sign for fermions) unless
    /// they are a creator/annihilator pair on the same mode.
    pub fn swappable(&self, other: &LadderOp) -> bool {
        !(self.same_mode(other) && self.dagger != other.dagger)
    }

    pub fn adjoint(&self) -> Self {
        Self { dagger: !self.dagger, ..*self }
    }

    pub fn mode_index(&self, space: &ModeSpace) -> usize {
        self.flavor * space.sites + self.site
    }

    fn key(&self) -> (bool, usize, usize) {
        (!self.dagger, self.flavor, self.site)
    }
}

/// Creators sort before annihilators, then by `(flavor, site)`.
impl Ord for LadderOp {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for LadderOp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl LadderOp {
    pub(crate) fn write(&self, f: &mut impl fmt::Write, with_flavor: bool) -> fmt::Result {
        let head = if self.dagger { "a+" } else { "a" };
        if with_flavor {
            write!(f, "{head}({},{})", self.site, self.flavor)
        } else {
            write!(f, "{head}({})", self.site)
        }
    }
}
