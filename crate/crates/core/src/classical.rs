//! Classical signal mechanics on a physical register: permutation flows,
//! signal permutation dynamics, recurrence, observables and mixtures.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::rat::Rat;
use crate::register::{PhysicalRegister, RegisterState};
use crate::Error;

/// A bijection on `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// `0 → 1 → … → n-1 → 0`.
    pub fn full_cycle(n: usize) -> Self {
        Permutation {
            images: (0..n).map(|i| (i + 1) % n.max(1)).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, Error> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image {x} out of range 0..{n}"
                )));
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPermutation(format!("image {x} repeated")));
            }
        }
        Ok(Permutation { images })
    }

    /// Parses cycle notation such as `(0 1 3)(2)` over `base..base+n`.
    /// Unlisted points are fixed.
    pub fn from_cycles(text: &str, n: usize, base: usize) -> Result<Self, Error> {
        let bad = |m: &str| Error::InvalidPermutation(format!("{m} in `{text}`"));
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(|| bad("expected `(`"))?;
            let close = body.find(')').ok_or_else(|| bad("unclosed cycle"))?;
            let mut cycle = Vec::new();
            for tok in body[..close].split(|c: char| c == ',' || c.is_whitespace()) {
                if tok.is_empty() {
                    continue;
                }
                let v: usize = tok.parse().map_err(|_| bad("bad element"))?;
                if v < base || v - base >= n {
                    return Err(bad("element out of range"));
                }
                let v = v - base;
                if std::mem::replace(&mut touched[v], true) {
                    return Err(bad("element appears twice"));
                }
                cycle.push(v);
            }
            for (i, &x) in cycle.iter().enumerate() {
                images[x] = cycle[(i + 1) % cycle.len()];
            }
            rest = body[close + 1..].trim_start();
        }
        Ok(Permutation { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Permutation) -> Self {
        Permutation {
            images: first.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    /// Disjoint cycles, each starting at its smallest element, in order of
    /// that element. Fixed points are period-1 cycles.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.cycles() {
            write!(f, "(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Reversible one-step dynamics on the `2^r` basis states of a rank-`r`
/// register.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PermutationFlow {
    /// Arbitrary permutation of basis indices.
    State { rank: usize, perm: Permutation },
    /// Permutation `P*` of sites: the new occupancy of site `j` is the old
    /// occupancy of site `P*j`. Conserves signality.
    Signal { perm: Permutation },
}

impl PermutationFlow {
    pub fn state(rank: usize, perm: Permutation) -> Result<Self, Error> {
        if rank > 20 || perm.len() != 1usize << rank {
            return Err(Error::InvalidPermutation(format!(
                "state flow on rank {rank} needs {} images, got {}",
                1u64 << rank.min(63),
                perm.len()
            )));
        }
        Ok(PermutationFlow::State { rank, perm })
    }

    /// `perm` acts on 0-based site positions.
    pub fn signal(perm: Permutation) -> Result<Self, Error> {
        if perm.is_empty() || perm.len() > 20 {
            return Err(Error::InvalidPermutation(
                "signal flow rank must be 1..=20".into(),
            ));
        }
        Ok(PermutationFlow::Signal { perm })
    }

    pub fn identity(rank: usize) -> Self {
        PermutationFlow::State {
            rank,
            perm: Permutation::identity(1 << rank),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            PermutationFlow::State { rank, .. } => *rank,
            PermutationFlow::Signal { perm } => perm.len(),
        }
    }

    pub fn dim(&self) -> u64 {
        1 << self.rank()
    }

    pub fn step(&self, k: u64) -> u64 {
        match self {
            PermutationFlow::State { perm, .. } => perm.apply(k as usize) as u64,
            PermutationFlow::Signal { perm } => (0..perm.len())
                .filter(|&j| k >> perm.apply(j) & 1 == 1)
                .fold(0, |acc, j| acc | 1 << j),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            PermutationFlow::State { rank, perm } => PermutationFlow::State {
                rank: *rank,
                perm: perm.inverse(),
            },
            PermutationFlow::Signal { perm } => PermutationFlow::Signal {
                perm: perm.inverse(),
            },
        }
    }

    /// The induced permutation of basis indices.
    pub fn to_state_permutation(&self) -> Permutation {
        match self {
            PermutationFlow::State { perm, .. } => perm.clone(),
            PermutationFlow::Signal { .. } => Permutation {
                images: (0..self.dim()).map(|k| self.step(k) as usize).collect(),
            },
        }
    }

    /// Steps until `k` first returns to itself.
    pub fn recurrence_time(&self, k: u64) -> u64 {
        let mut x = self.step(k);
        let mut n = 1;
        while x != k {
            x = self.step(x);
            n += 1;
        }
        n
    }

    pub fn cycle_analysis(&self) -> Vec<Cycle> {
        self.to_state_permutation()
            .cycles()
            .into_iter()
            .map(|c| Cycle {
                period: c.len(),
                states: c.into_iter().map(|x| x as u64).collect(),
            })
            .collect()
    }
}

pub fn flow_step(flow: &PermutationFlow, k: u64) -> u64 {
    flow.step(k)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub states: Vec<u64>,
    pub period: usize,
}

/// Numbers of distinct autonomous dynamics on a rank-`r` register.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynamicsCounts {
    /// `(2^r)^(2^r)`
    pub all_maps: BigUint,
    /// `(2^r)!`
    pub permutation_flows: BigUint,
    /// `r!`
    pub signal_flows: BigUint,
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn count_dynamics(r: u32) -> DynamicsCounts {
    let d = BigUint::one() << r;
    let d_small = 1u64 << r.min(63);
    DynamicsCounts {
        all_maps: num_traits::pow(d.clone(), d_small as usize),
        permutation_flows: factorial(d_small),
        signal_flows: factorial(u64::from(r)),
    }
}

/// Weighted relevant question `Σ_k |k) X_k (k|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalObservable {
    values: Vec<Rat>,
}

impl ClassicalObservable {
    /// One value per basis index; length must be a power of two.
    pub fn new(values: Vec<Rat>) -> Result<Self, Error> {
        if !values.len().is_power_of_two() {
            return Err(Error::OutOfRange(format!(
                "observable needs 2^r values, got {}",
                values.len()
            )));
        }
        Ok(ClassicalObservable { values })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn value(&self, k: u64) -> Result<&Rat, Error> {
        self.values
            .get(k as usize)
            .ok_or_else(|| Error::OutOfRange(format!("basis index {k} outside observable")))
    }

    /// `(k|X|k)` for a pure basis state.
    pub fn expectation(&self, k: u64) -> Result<Rat, Error> {
        self.value(k).cloned()
    }

    pub fn mixture_expectation(&self, mix: &ClassicalMixture) -> Result<Rat, Error> {
        self.check_dim(mix.dim())?;
        Ok(mix
            .weights
            .iter()
            .zip(&self.values)
            .map(|(w, x)| w * x)
            .sum())
    }

    /// `Σ_k ω_k X_{Pk}`: the mixture evolved by a flow, then measured.
    pub fn evolved_expectation(
        &self,
        flow: &PermutationFlow,
        mix: &ClassicalMixture,
    ) -> Result<Rat, Error> {
        self.check_dim(mix.dim())?;
        self.check_dim(flow.dim() as usize)?;
        Ok(mix
            .weights
            .iter()
            .enumerate()
            .map(|(k, w)| w * &self.values[flow.step(k as u64) as usize])
            .sum())
    }

    fn check_dim(&self, d: usize) -> Result<(), Error> {
        if d == self.dim() {
            Ok(())
        } else {
            Err(Error::OutOfRange(format!(
                "dimension {d} does not match observable {}",
                self.dim()
            )))
        }
    }

    /// Dense diagonal matrix of the observable.
    pub fn matrix(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.dim());
        for (k, x) in self.values.iter().enumerate() {
            m.set(k, k, x.clone());
        }
        m
    }
}

/// Probabilities `ω_k` over initial basis states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalMixture {
    weights: Vec<Rat>,
}

impl ClassicalMixture {
    pub fn new(weights: Vec<Rat>) -> Result<Self, Error> {
        if !weights.len().is_power_of_two() {
            return Err(Error::OutOfRange("mixture needs 2^r weights".into()));
        }
        if weights.iter().any(Rat::is_negative) {
            return Err(Error::InvalidMixture("negative weight".into()));
        }
        let total: Rat = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidMixture(format!("weights sum to {total}")));
        }
        Ok(ClassicalMixture { weights })
    }

    pub fn uniform(rank: usize) -> Self {
        let d = 1usize << rank;
        ClassicalMixture {
            weights: vec![Rat::new(1, d as i64); d],
        }
    }

    pub fn pure(rank: usize, k: u64) -> Result<Self, Error> {
        let d = 1usize << rank;
        if k as usize >= d {
            return Err(Error::OutOfRange(format!("basis index {k} ≥ {d}")));
        }
        let mut weights = vec![Rat::zero(); d];
        weights[k as usize] = Rat::one();
        Ok(ClassicalMixture { weights })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    /// `ρ = Σ_k ω_k |k)(k|`.
    pub fn density_matrix(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.dim());
        for (k, w) in self.weights.iter().enumerate() {
            m.set(k, k, w.clone());
        }
        m
    }
}

/// Small dense rational matrix for the trace formulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    n: usize,
    cells: Vec<Rat>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            cells: vec![Rat::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    /// Matrix of a flow: column `k` has a 1 in row `Pk`.
    pub fn of_flow(flow: &PermutationFlow) -> Self {
        let n = flow.dim() as usize;
        let mut m = DenseMatrix::zeros(n);
        for k in 0..n {
            m.set(flow.step(k as u64) as usize, k, Rat::one());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.cells[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.cells[r * self.n + c] = v;
    }

    pub fn mul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n, rhs.n);
        let mut out = DenseMatrix::zeros(self.n);
        for r in 0..self.n {
            for k in 0..self.n {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..self.n {
                    let b = rhs.get(k, c);
                    if !b.is_zero() {
                        let v = out.get(r, c) + &(a * b);
                        out.set(r, c, v);
                    }
                }
            }
        }
        out
    }

    /// Real matrices only, so the dual is the transpose.
    pub fn transpose(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn trace(&self) -> Rat {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }
}

/// `Tr{X U ρ Ū}`; with `flow = None` this is `Tr{X ρ}`.
pub fn trace_expectation(
    obs: &ClassicalObservable,
    mix: &ClassicalMixture,
    flow: Option<&PermutationFlow>,
) -> Result<Rat, Error> {
    if obs.dim() != mix.dim() || flow.is_some_and(|f| f.dim() as usize != obs.dim()) {
        return Err(Error::OutOfRange("dimension mismatch in trace".into()));
    }
    let rho = mix.density_matrix();
    let evolved = match flow {
        Some(f) => {
            let u = DenseMatrix::of_flow(f);
            u.mul(&rho).mul(&u.transpose())
        }
        None => rho,
    };
    Ok(obs.matrix().mul(&evolved).trace())
}

/// Evolution given by the image of each source basis state.
#[derive(Clone, Debug)]
pub struct Evolution {
    images: Vec<RegisterState>,
}

impl Evolution {
    pub fn new(images: Vec<RegisterState>) -> Self {
        Evolution { images }
    }

    pub fn from_flow(flow: &PermutationFlow, reg: &PhysicalRegister) -> Result<Self, Error> {
        let images = (0..flow.dim())
            .map(|k| reg.state(flow.step(k)))
            .collect::<Result<_, _>>()?;
        Ok(Evolution { images })
    }

    pub fn images(&self) -> &[RegisterState] {
        &self.images
    }

    /// `(Uk|Uk')` over source pairs: the matrix `ŪU`.
    pub fn gram(&self) -> Vec<Vec<u8>> {
        self.images
            .iter()
            .map(|a| {
                self.images
                    .iter()
                    .map(|b| crate::register::bracket_states(a, b))
                    .collect()
            })
            .collect()
    }

    /// `ŪU = I` on the source register.
    pub fn is_semiunitary(&self) -> bool {
        self.gram()
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, &v)| v == u8::from(i == j)))
    }

    /// Matrix of `UŪ` over the target register basis.
    pub fn reverse_product(&self, target: &PhysicalRegister) -> Result<Vec<Vec<u8>>, Error> {
        let basis: Vec<RegisterState> = (0..target.dim())
            .map(|t| target.state(t))
            .collect::<Result<_, _>>()?;
        Ok(basis
            .iter()
            .map(|t| {
                basis
                    .iter()
                    .map(|t2| {
                        self.images
                            .iter()
                            .map(|u| {
                                crate::register::bracket_states(t, u)
                                    * crate::register::bracket_states(u, t2)
                            })
                            .sum()
                    })
                    .collect()
            })
            .collect())
    }

    pub fn reverse_is_identity(&self, target: &PhysicalRegister) -> Result<bool, Error> {
        Ok(self
            .reverse_product(target)?
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, &v)| v == u8::from(i == j))))
    }
}

pub fn check_semiunitary(evolution: &Evolution) -> bool {
    evolution.is_semiunitary()
}
