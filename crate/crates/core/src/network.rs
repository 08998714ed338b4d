//! Optical networks of beamsplitters, mirrors, bombs and annihilation
//! vertices, compiled into stage maps, plus the two built-in experiments.
//!
//! Phase conventions are fixed: transmission multiplies by `i`, reflection
//! by `-1`, and a beamsplitter splits with amplitude `1/√2` per arm.

use std::collections::{BTreeMap, BTreeSet};

use crate::amp::Amp;
use crate::labstate::{
    Condition, DensityState, Generator, Labstate, Monomial, Projector, StageMap,
};
use crate::rat::Rat;
use crate::Error;

pub fn transmit_phase() -> Amp {
    Amp::i()
}

pub fn reflect_phase() -> Amp {
    -Amp::one()
}

pub fn split_factor() -> Amp {
    Amp::inv_sqrt2()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Component {
    /// A signal at `input` goes to `(i·A_transmit − A_reflect)/√2`.
    Beamsplitter {
        input: u32,
        transmit: u32,
        reflect: u32,
    },
    /// A signal at `input` goes to `−A_output`.
    Mirror { input: u32, output: u32 },
    /// Bomb in contact with `site`. An active bomb decommissions the site
    /// before the run and absorbs any signal sent to it; a dud does nothing.
    Bomb { site: u32, active: bool },
    /// Joint arrival at both sites annihilates into `D_a·D_b`.
    AnnihilationVertex { sites: (u32, u32) },
    /// One signal at `input` becomes a pair, each member split by its own
    /// beamsplitter given as `(transmit, reflect)`.
    PairSource {
        input: u32,
        first: (u32, u32),
        second: (u32, u32),
    },
}

impl Component {
    fn sites(&self) -> Vec<u32> {
        match *self {
            Component::Beamsplitter {
                input,
                transmit,
                reflect,
            } => vec![input, transmit, reflect],
            Component::Mirror { input, output } => vec![input, output],
            Component::Bomb { site, .. } => vec![site],
            Component::AnnihilationVertex { sites: (a, b) } => vec![a, b],
            Component::PairSource {
                input,
                first,
                second,
            } => {
                vec![input, first.0, first.1, second.0, second.1]
            }
        }
    }

    fn relabel(&self, f: impl Fn(u32) -> u32) -> Component {
        match *self {
            Component::Beamsplitter {
                input,
                transmit,
                reflect,
            } => Component::Beamsplitter {
                input: f(input),
                transmit: f(transmit),
                reflect: f(reflect),
            },
            Component::Mirror { input, output } => Component::Mirror {
                input: f(input),
                output: f(output),
            },
            Component::Bomb { site, active } => Component::Bomb {
                site: f(site),
                active,
            },
            Component::AnnihilationVertex { sites: (a, b) } => Component::AnnihilationVertex {
                sites: (f(a), f(b)),
            },
            Component::PairSource {
                input,
                first,
                second,
            } => Component::PairSource {
                input: f(input),
                first: (f(first.0), f(first.1)),
                second: (f(second.0), f(second.1)),
            },
        }
    }
}

fn split(transmit: u32, reflect: u32) -> [(Amp, u32); 2] {
    [
        (transmit_phase() * split_factor(), transmit),
        (reflect_phase() * split_factor(), reflect),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    esds: u32,
    stages: Vec<Vec<Component>>,
}

impl Network {
    /// Detectors `1..=esds`, `stages` empty stages.
    pub fn new(esds: u32, stages: usize) -> Self {
        Network {
            esds,
            stages: vec![Vec::new(); stages],
        }
    }

    /// Stage numbers start at 1.
    pub fn add(mut self, stage: usize, c: Component) -> Self {
        if stage > self.stages.len() {
            self.stages.resize(stage, Vec::new());
        }
        self.stages[stage.max(1) - 1].push(c);
        self
    }

    pub fn esds(&self) -> u32 {
        self.esds
    }

    pub fn stage_count(&self) -> usize {
        self.stages.len()
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &Component)> {
        self.stages
            .iter()
            .enumerate()
            .flat_map(|(s, cs)| cs.iter().map(move |c| (s + 1, c)))
    }

    fn active_bombs(&self) -> BTreeSet<u32> {
        self.components()
            .filter_map(|(_, c)| match c {
                Component::Bomb { site, active: true } => Some(*site),
                _ => None,
            })
            .collect()
    }

    /// Same network with every site renamed through `map` (unmapped sites kept).
    pub fn relabel(&self, map: &BTreeMap<u32, u32>) -> Network {
        let f = |k: u32| map.get(&k).copied().unwrap_or(k);
        Network {
            esds: self.esds,
            stages: self
                .stages
                .iter()
                .map(|cs| cs.iter().map(|c| c.relabel(f)).collect())
                .collect(),
        }
    }

    /// Initial state with active bombs placed: each bomb site decommissioned.
    pub fn prepare(&self, state: &Labstate) -> Labstate {
        self.active_bombs()
            .into_iter()
            .fold(state.clone(), |s, k| s.apply_decommission(k))
    }

    pub fn compile(&self) -> Result<Vec<StageMap>, Error> {
        for (stage, c) in self.components() {
            if let Some(k) = c.sites().into_iter().find(|&k| k == 0 || k > self.esds) {
                return Err(Error::Wiring(format!(
                    "stage {stage}: site {k} is not a declared detector"
                )));
            }
        }
        self.check_acyclic()?;

        let bombs = self.active_bombs();
        let mut maps = Vec::with_capacity(self.stages.len());
        for (idx, comps) in self.stages.iter().enumerate() {
            let stage = idx + 1;
            let mut map = StageMap::new();
            let mut consumed = BTreeSet::new();
            for c in comps {
                let (key, image): (Vec<u32>, Vec<(Amp, Monomial)>) = match *c {
                    Component::Beamsplitter {
                        input,
                        transmit,
                        reflect,
                    } => (
                        vec![input],
                        split(transmit, reflect)
                            .into_iter()
                            .map(|(a, k)| (a, Monomial::create(&[k])))
                            .collect(),
                    ),
                    Component::Mirror { input, output } => (
                        vec![input],
                        vec![(reflect_phase(), Monomial::create(&[output]))],
                    ),
                    Component::PairSource {
                        input,
                        first,
                        second,
                    } => {
                        let mut image = Vec::new();
                        for (a, k1) in split(first.0, first.1) {
                            for (b, k2) in split(second.0, second.1) {
                                image.push((&a * &b, Monomial::create(&[k1, k2])));
                            }
                        }
                        (vec![input], image)
                    }
                    Component::AnnihilationVertex { sites: (a, b) } => {
                        if a == b {
                            return Err(Error::Wiring(format!(
                                "stage {stage}: annihilation vertex needs two sites"
                            )));
                        }
                        (
                            vec![a, b],
                            vec![(
                                Amp::one(),
                                Monomial(vec![
                                    Generator::Decommission(a),
                                    Generator::Decommission(b),
                                ]),
                            )],
                        )
                    }
                    Component::Bomb { .. } => continue,
                };
                if key.len() == 1 && !consumed.insert(key[0]) {
                    return Err(Error::Wiring(format!(
                        "stage {stage}: site {} feeds more than one component",
                        key[0]
                    )));
                }
                let key: BTreeSet<u32> = key.into_iter().collect();
                if map.insert_rule(key.clone(), image).is_some() {
                    return Err(Error::Wiring(format!(
                        "stage {stage}: duplicate vertex on {key:?}"
                    )));
                }
            }
            // Signals never reach an active bomb site; what would have
            // arrived there becomes the explosion.
            for k in &bombs {
                let dead: Vec<BTreeSet<u32>> = map
                    .rules()
                    .filter(|(key, _)| key.contains(k))
                    .map(|(key, _)| key.clone())
                    .collect();
                for key in dead {
                    map.remove_rule(&key);
                }
            }
            for (_, image) in map.rules_mut() {
                for (_, m) in image.iter_mut() {
                    for g in m.0.iter_mut() {
                        if let Generator::Create(k) = *g {
                            if bombs.contains(&k) {
                                *g = Generator::Decommission(k);
                            }
                        }
                    }
                }
            }
            if let Some(defect) = map.isometry_defect() {
                return Err(Error::NonIsometric(format!("stage {stage}: {defect}")));
            }
            maps.push(map);
        }
        Ok(maps)
    }

    // A site produced at stage s may only be consumed at a later stage.
    fn check_acyclic(&self) -> Result<(), Error> {
        let mut first_output: BTreeMap<u32, usize> = BTreeMap::new();
        let mut inputs: Vec<(usize, u32)> = Vec::new();
        for (stage, c) in self.components() {
            let (ins, outs): (Vec<u32>, Vec<u32>) = match *c {
                Component::Beamsplitter {
                    input,
                    transmit,
                    reflect,
                } => (vec![input], vec![transmit, reflect]),
                Component::Mirror { input, output } => (vec![input], vec![output]),
                Component::PairSource {
                    input,
                    first,
                    second,
                } => (vec![input], vec![first.0, first.1, second.0, second.1]),
                Component::AnnihilationVertex { sites: (a, b) } => (vec![a, b], vec![a, b]),
                Component::Bomb { .. } => (vec![], vec![]),
            };
            if !matches!(c, Component::AnnihilationVertex { .. }) {
                for o in outs {
                    let e = first_output.entry(o).or_insert(stage);
                    *e = (*e).min(stage);
                }
            }
            inputs.extend(ins.into_iter().map(|k| (stage, k)));
        }
        for (stage, k) in inputs {
            if let Some(&out_stage) = first_output.get(&k) {
                if out_stage >= stage {
                    return Err(Error::Wiring(format!(
                        "site {k} is consumed at stage {stage} but produced at stage {out_stage}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Declared detectors, initial state, stages and named outcomes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub esds: u32,
    pub initial: Labstate,
    pub stages: Vec<(String, StageMap)>,
    pub outcomes: Vec<(String, Projector)>,
}

/// States after each stage (index 0 is the initial state) and the outcome
/// probabilities on the last one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub states: Vec<Labstate>,
    pub probabilities: Vec<(String, Rat)>,
}

impl Run {
    pub fn final_state(&self) -> &Labstate {
        self.states.last().expect("run holds the initial state")
    }

    pub fn probability(&self, name: &str) -> Option<&Rat> {
        self.probabilities
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, p)| p)
    }
}

impl Scenario {
    pub fn from_network(
        network: &Network,
        initial: &Labstate,
        outcomes: Vec<(String, Projector)>,
    ) -> Result<Self, Error> {
        let stages = network
            .compile()?
            .into_iter()
            .enumerate()
            .map(|(i, m)| (format!("s{}", i + 1), m))
            .collect();
        Ok(Scenario {
            esds: network.esds(),
            initial: network.prepare(initial),
            stages,
            outcomes,
        })
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !self.initial.is_normalized() {
            return Err(Error::NonIsometric(format!(
                "initial state has norm² {}",
                self.initial.norm_sqr()
            )));
        }
        for (name, map) in &self.stages {
            if let Some(defect) = map.isometry_defect() {
                return Err(Error::NonIsometric(format!("stage {name}: {defect}")));
            }
        }
        Ok(())
    }

    /// Runs the first `upto` stages (all if `None`).
    pub fn run(&self, upto: Option<usize>) -> Result<Run, Error> {
        let n = upto.unwrap_or(self.stages.len()).min(self.stages.len());
        let mut states = vec![self.initial.clone()];
        for (_, map) in &self.stages[..n] {
            let next = map.apply(states.last().unwrap())?;
            states.push(next);
        }
        let last = states.last().unwrap();
        let probabilities = self
            .outcomes
            .iter()
            .map(|(name, p)| Ok((name.clone(), crate::labstate::probability(last, p)?)))
            .collect::<Result<_, Error>>()?;
        Ok(Run {
            states,
            probabilities,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BombKind {
    Active,
    Dud,
}

/// The Mach-Zehnder bomb tester: source 1, arms 2/3, mirrors onto 5/4,
/// output beamsplitter onto detectors 6 and 7, bomb on site 2.
pub fn ev_network(bomb: BombKind) -> Network {
    Network::new(7, 3)
        .add(
            1,
            Component::Beamsplitter {
                input: 1,
                transmit: 2,
                reflect: 3,
            },
        )
        .add(
            2,
            Component::Mirror {
                input: 2,
                output: 5,
            },
        )
        .add(
            2,
            Component::Mirror {
                input: 3,
                output: 4,
            },
        )
        .add(
            2,
            Component::Bomb {
                site: 2,
                active: bomb == BombKind::Active,
            },
        )
        .add(
            3,
            Component::Beamsplitter {
                input: 4,
                transmit: 6,
                reflect: 7,
            },
        )
        .add(
            3,
            Component::Beamsplitter {
                input: 5,
                transmit: 7,
                reflect: 6,
            },
        )
}

pub fn ev_outcomes() -> Vec<(String, Projector)> {
    vec![
        (
            "Explode".into(),
            Projector::new(vec![Condition::Faulty(2), Condition::NoOtherSignal]),
        ),
        ("D6".into(), Projector::signals(&[6])),
        ("D7".into(), Projector::signals(&[7])),
    ]
}

pub fn ev_scenario(bomb: BombKind) -> Scenario {
    let initial = Labstate::vacuum(1..=7).apply_creation(1);
    Scenario::from_network(&ev_network(bomb), &initial, ev_outcomes())
        .expect("built-in bomb tester compiles")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvSetting {
    Bomb(BombKind),
    /// Probability of drawing an active bomb.
    Mixture(Rat),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvReport {
    pub explode: Rat,
    pub d6: Rat,
    pub d7: Rat,
}

pub fn run_ev(setting: &EvSetting) -> Result<EvReport, Error> {
    let omega_a = match setting {
        EvSetting::Bomb(BombKind::Active) => Rat::one(),
        EvSetting::Bomb(BombKind::Dud) => Rat::zero(),
        EvSetting::Mixture(w) => w.clone(),
    };
    let omega_d = Rat::one() - &omega_a;
    let active = ev_scenario(BombKind::Active).run(None)?;
    let dud = ev_scenario(BombKind::Dud).run(None)?;
    let rho = DensityState::new(vec![
        (omega_a, active.final_state().clone()),
        (omega_d, dud.final_state().clone()),
    ])?;
    let outcomes = ev_outcomes();
    let p = |i: usize| rho.probability(&outcomes[i].1);
    Ok(EvReport {
        explode: p(0)?,
        d6: p(1)?,
        d7: p(2)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sweeps {
    Count(u32),
    Limit,
}

/// Fraction of active bombs certified intact after repeatedly retesting the
/// ones that fired detector 6.
pub fn stockpile_yield(sweeps: Sweeps) -> Result<Rat, Error> {
    let active = run_ev(&EvSetting::Bomb(BombKind::Active))?;
    match sweeps {
        Sweeps::Count(0) => Err(Error::OutOfRange("at least one sweep".into())),
        Sweeps::Count(n) => Ok((0..n).map(|k| &active.d7 * &active.d6.pow(k)).sum()),
        Sweeps::Limit => {
            let rest = Rat::one() - &active.d6;
            rest.recip()
                .map(|r| &active.d7 * &r)
                .ok_or_else(|| Error::OutOfRange("retest probability is 1".into()))
        }
    }
}

/// Coupled interferometers for an electron/positron pair. Positron arms are
/// 2 and 3, electron arms 5 and 4; arms 3 and 4 meet at the annihilation
/// vertex. Positron detectors are 6/7, electron detectors 8/9.
pub fn hardy_network() -> Network {
    Network::new(9, 2)
        .add(
            1,
            Component::PairSource {
                input: 1,
                first: (2, 3),
                second: (5, 4),
            },
        )
        .add(
            2,
            Component::Beamsplitter {
                input: 2,
                transmit: 7,
                reflect: 6,
            },
        )
        .add(
            2,
            Component::Beamsplitter {
                input: 3,
                transmit: 6,
                reflect: 7,
            },
        )
        .add(
            2,
            Component::Beamsplitter {
                input: 4,
                transmit: 9,
                reflect: 8,
            },
        )
        .add(
            2,
            Component::Beamsplitter {
                input: 5,
                transmit: 8,
                reflect: 9,
            },
        )
        .add(2, Component::AnnihilationVertex { sites: (3, 4) })
}

/// Exchanges the electron and positron roles.
pub fn hardy_arm_swap() -> BTreeMap<u32, u32> {
    [
        (2, 5),
        (5, 2),
        (3, 4),
        (4, 3),
        (6, 9),
        (9, 6),
        (7, 8),
        (8, 7),
    ]
    .into_iter()
    .collect()
}

pub const HARDY_OUTCOMES: [&str; 5] = ["6,8", "7,8", "7,9", "6,9", "Annihilation"];

pub fn hardy_outcomes() -> Vec<(String, Projector)> {
    let mut v: Vec<(String, Projector)> = [(6, 8), (7, 8), (7, 9), (6, 9)]
        .iter()
        .map(|&(a, b)| (format!("{a},{b}"), Projector::signals(&[a, b])))
        .collect();
    v.push((
        "Annihilation".into(),
        Projector::new(vec![
            Condition::Faulty(3),
            Condition::Faulty(4),
            Condition::NoOtherSignal,
        ]),
    ));
    v
}

pub fn hardy_scenario() -> Scenario {
    let initial = Labstate::vacuum(1..=9).apply_creation(1);
    Scenario::from_network(&hardy_network(), &initial, hardy_outcomes())
        .expect("built-in Hardy network compiles")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HardyReport {
    pub p68: Rat,
    pub p78: Rat,
    pub p79: Rat,
    pub p69: Rat,
    pub annihilation: Rat,
    pub final_state: Labstate,
}

impl HardyReport {
    pub fn total(&self) -> Rat {
        [
            &self.p68,
            &self.p78,
            &self.p79,
            &self.p69,
            &self.annihilation,
        ]
        .into_iter()
        .sum()
    }
}

pub fn run_hardy() -> Result<HardyReport, Error> {
    let run = hardy_scenario().run(None)?;
    let p = |name: &str| run.probability(name).cloned().expect("built-in outcome");
    Ok(HardyReport {
        p68: p("6,8"),
        p78: p("7,8"),
        p79: p("7,9"),
        p69: p("6,9"),
        annihilation: p("Annihilation"),
        final_state: run.final_state().clone(),
    })
}
