//! Finite-support states of the universal register.
//!
//! Every detector site not mentioned in a [`RegisterState`] is in the empty
//! state, so the information void is the empty map. Sites may carry an
//! observer tag to keep the registers of distinct observers apart.

use std::collections::BTreeMap;
use std::fmt;

use crate::bits::{BitOp, PBitState};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Site {
    pub id: u32,
    pub observer: Option<u8>,
}

impl Site {
    pub const fn new(id: u32) -> Self {
        Site { id, observer: None }
    }

    pub const fn of(observer: u8, id: u32) -> Self {
        Site {
            id,
            observer: Some(observer),
        }
    }
}

impl From<u32> for Site {
    fn from(id: u32) -> Self {
        Site::new(id)
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.observer {
            Some(o) => write!(f, "{}^{}", self.id, o),
            None => write!(f, "{}", self.id),
        }
    }
}

/// Assignment of power-set states to sites, empty sites omitted.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RegisterState {
    cells: BTreeMap<Site, PBitState>,
}

impl RegisterState {
    /// The information void `|Ω)`.
    pub fn void() -> Self {
        RegisterState::default()
    }

    /// Rank-`r` contextual vacuum over sites `1..=r`.
    pub fn vacuum(r: u32) -> Self {
        RegisterState::void().construct((1..=r).map(Site::new))
    }

    pub fn get(&self, site: impl Into<Site>) -> PBitState {
        self.cells
            .get(&site.into())
            .copied()
            .unwrap_or(PBitState::Empty)
    }

    pub fn set(&mut self, site: impl Into<Site>, s: PBitState) {
        let site = site.into();
        if s == PBitState::Empty {
            self.cells.remove(&site);
        } else {
            self.cells.insert(site, s);
        }
    }

    pub fn with(mut self, site: impl Into<Site>, s: PBitState) -> Self {
        self.set(site, s);
        self
    }

    /// Applies `C` at each listed site.
    pub fn construct<I, S>(&self, sites: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<Site>,
    {
        let mut out = self.clone();
        for s in sites {
            out.set(s, PBitState::Ground);
        }
        out
    }

    /// Applies `op` at `site`, leaving every other site alone.
    pub fn apply_site_op(&self, op: BitOp, site: impl Into<Site>) -> Self {
        let site = site.into();
        let mut out = self.clone();
        out.set(site, op.apply(self.get(site)));
        out
    }

    /// Non-empty sites in order.
    pub fn iter(&self) -> impl Iterator<Item = (Site, PBitState)> + '_ {
        self.cells.iter().map(|(k, v)| (*k, *v))
    }

    pub fn is_void(&self) -> bool {
        self.cells.is_empty()
    }

    /// Number of existing (non-empty) detectors.
    pub fn rank(&self) -> usize {
        self.cells.len()
    }

    pub fn sites_in(&self, state: PBitState) -> impl Iterator<Item = Site> + '_ {
        self.cells
            .iter()
            .filter(move |(_, v)| **v == state)
            .map(|(k, _)| *k)
    }

    /// Number of signal-state detectors over the whole state.
    pub fn signal_count(&self) -> usize {
        self.sites_in(PBitState::Signal).count()
    }

    /// Every detector is ground or signal.
    pub fn is_normal(&self) -> bool {
        self.cells.values().all(|s| s.is_normal())
    }
}

impl fmt::Debug for RegisterState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cells.is_empty() {
            return write!(f, "|Ω)");
        }
        write!(f, "|")?;
        for (i, (site, s)) in self.cells.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{site}:{}", s.symbol())?;
        }
        write!(f, ")")
    }
}

/// `(a|b)`: 1 iff the states agree at every site.
pub fn bracket_states(a: &RegisterState, b: &RegisterState) -> u8 {
    u8::from(a == b)
}

/// True iff no site appears in both lists.
pub fn disjoint_sites(a: &[Site], b: &[Site]) -> bool {
    a.iter().all(|s| !b.contains(s))
}

/// An ordered set of normal detectors with computational basis `|k)`,
/// where site number `j` (1-based position) carries bit weight `2^(j-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhysicalRegister {
    sites: Vec<Site>,
}

impl PhysicalRegister {
    pub fn new(sites: Vec<Site>) -> Result<Self, Error> {
        if sites.is_empty() {
            return Err(Error::OutOfRange("physical register needs rank ≥ 1".into()));
        }
        for (i, s) in sites.iter().enumerate() {
            if sites[..i].contains(s) {
                return Err(Error::OutOfRange(format!("site {s} listed twice")));
            }
        }
        if sites.len() > 63 {
            return Err(Error::OutOfRange("rank above 63 not supported".into()));
        }
        Ok(PhysicalRegister { sites })
    }

    /// Sites `1..=r`.
    pub fn standard(r: u32) -> Result<Self, Error> {
        PhysicalRegister::new((1..=r).map(Site::new).collect())
    }

    pub fn rank(&self) -> usize {
        self.sites.len()
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    /// Number of basis states, `2^r`.
    pub fn dim(&self) -> u64 {
        1u64 << self.rank()
    }

    pub fn ground(&self) -> RegisterState {
        RegisterState::void().construct(self.sites.iter().copied())
    }

    pub fn state(&self, k: u64) -> Result<RegisterState, Error> {
        if k >= self.dim() {
            return Err(Error::OutOfRange(format!(
                "basis index {k} ≥ {}",
                self.dim()
            )));
        }
        let mut st = self.ground();
        for (j, site) in self.sites.iter().enumerate() {
            if k >> j & 1 == 1 {
                st.set(*site, PBitState::Signal);
            }
        }
        Ok(st)
    }

    /// Basis index of `state` restricted to this register's sites.
    pub fn index_of(&self, state: &RegisterState) -> Result<u64, Error> {
        let mut k = 0u64;
        for (j, site) in self.sites.iter().enumerate() {
            match state.get(*site) {
                PBitState::Ground => {}
                PBitState::Signal => k |= 1 << j,
                other => {
                    return Err(Error::NonNormalState {
                        site: site.to_string(),
                        state: other,
                    })
                }
            }
        }
        Ok(k)
    }

    /// Signal count over the register's sites.
    pub fn signality(&self, state: &RegisterState) -> Result<usize, Error> {
        self.index_of(state).map(|k| k.count_ones() as usize)
    }
}

/// Number of signal-state detectors in a basis index.
pub fn signality_of_index(k: u64) -> usize {
    k.count_ones() as usize
}

/// Size of signal class `d` in a rank-`r` register: `C(r, d)`.
pub fn signal_class_size(r: u32, d: u32) -> Result<num_bigint::BigUint, Error> {
    if d > r {
        return Err(Error::OutOfRange(format!("signality {d} exceeds rank {r}")));
    }
    let mut acc = num_bigint::BigUint::from(1u32);
    for j in 0..d {
        acc = acc * (r - j) / (j + 1);
    }
    Ok(acc)
}

/// Parses `|i1 i2 … ir)` into `(rank, k)`; leftmost digit is site 1.
pub fn parse_occupancy(s: &str) -> Result<(usize, u64), Error> {
    let bad = || Error::OutOfRange(format!("malformed occupancy string `{s}`"));
    let inner = s
        .trim()
        .strip_prefix('|')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(bad)?;
    if inner.is_empty() || inner.len() > 63 {
        return Err(bad());
    }
    let mut k = 0u64;
    for (j, ch) in inner.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => k |= 1 << j,
            _ => return Err(bad()),
        }
    }
    Ok((inner.len(), k))
}

pub fn format_occupancy(rank: usize, k: u64) -> String {
    let digits: String = (0..rank)
        .map(|j| if k >> j & 1 == 1 { '1' } else { '0' })
        .collect();
    format!("|{digits})")
}
