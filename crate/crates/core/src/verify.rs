//! Self-checks behind `labstate verify`: each block recomputes a reference
//! table or property and reports one line per assertion.

use std::fmt;

use crate::amp::Amp;
use crate::bits::{self, BitOp, PBitState, Question};
use crate::classical::{count_dynamics, Permutation, PermutationFlow};
use crate::labstate::{Generator, Labstate, Monomial};
use crate::network::{self, BombKind, EvSetting, Sweeps};
use crate::rat::Rat;
use crate::register::signality_of_index;
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub block: String,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(block: &str) -> Self {
        Report {
            block: block.to_string(),
            checks: Vec::new(),
        }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    fn expect_eq<T: PartialEq + fmt::Display>(&mut self, name: &str, got: &T, want: &T) {
        self.check(name, got == want, format!("got {got}, want {want}"));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "[{tag}] {}: {} ({})", self.block, c.name, c.detail)?;
        }
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{}: {verdict}", self.block)
    }
}

pub const BLOCKS: [&str; 4] = ["bitops", "flows", "ev", "hardy"];

pub fn run_block(name: &str) -> Result<Report, Error> {
    match name {
        "bitops" => Ok(bitops()),
        "flows" => Ok(flows()),
        "ev" => ev(),
        "hardy" => hardy(),
        other => Err(Error::OutOfRange(format!(
            "unknown verification block `{other}`"
        ))),
    }
}

/// Table of products of the four basic bit operators.
pub fn expected_bit_table() -> [[BitOp; 4]; 4] {
    use BitOp as B;
    [
        [B::P0, B::Z, B::A, B::Z],
        [B::Z, B::P1, B::Z, B::A_BAR],
        [B::Z, B::A, B::Z, B::P0],
        [B::A_BAR, B::Z, B::P1, B::Z],
    ]
}

pub fn bitops() -> Report {
    let mut r = Report::new("bitops");
    let all = bits::enumerate_bitops();
    let distinct: std::collections::BTreeSet<BitOp> = all.iter().copied().collect();
    r.check(
        "census",
        all.len() == 256 && distinct.len() == 256,
        format!("{} operators, {} distinct", all.len(), distinct.len()),
    );
    let named_present = BitOp::NAMED.iter().all(|(_, op)| distinct.contains(op));
    r.check(
        "named operators present",
        named_present,
        "I, Z, P0, P1, A, Ā, C, D",
    );

    let mut closed = true;
    let mut homomorphic = true;
    for o2 in &all {
        for o1 in &all {
            let p = bits::compose(*o2, *o1);
            closed &= distinct.contains(&p);
            homomorphic &= p.matrix() == o2.matrix().mul(&o1.matrix());
        }
    }
    r.check("closure", closed, "65536 products");
    r.check(
        "matrix homomorphism",
        homomorphic,
        "[O2O1] = [O2][O1] for 65536 pairs",
    );

    let table = bits::product_table(&bits::BASIC_FOUR);
    let want = expected_bit_table();
    let mut entries_ok = 0;
    for (i, row) in table.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            if *cell == want[i][j] {
                entries_ok += 1;
            }
        }
    }
    r.check(
        "product table",
        entries_ok == 16,
        format!("{entries_ok}/16 entries"),
    );

    let qubit = bits::qubit::table();
    let mut iso = 0;
    for i in 0..4 {
        for j in 0..4 {
            let mapped = qubit[i][j].map(|k| bits::BASIC_FOUR[k]).unwrap_or(BitOp::Z);
            if mapped == table[i][j] {
                iso += 1;
            }
        }
    }
    r.check(
        "qubit table isomorphism",
        iso == 16,
        format!("{iso}/16 entries"),
    );

    let mut brackets = 0;
    for q in PBitState::ALL {
        for s in PBitState::ALL {
            if bits::bracket(Question(q), s) == u8::from(q == s) {
                brackets += 1;
            }
        }
    }
    r.check(
        "bracket rule",
        brackets == 16,
        format!("{brackets}/16 relations"),
    );

    let idem = [BitOp::P0, BitOp::P1, BitOp::C, BitOp::D]
        .iter()
        .all(|&o| bits::compose(o, o) == o);
    let nil = bits::compose(BitOp::A, BitOp::A) == BitOp::Z
        && bits::compose(BitOp::A_BAR, BitOp::A_BAR) == BitOp::Z;
    r.check(
        "idempotents and nilpotents",
        idem && nil,
        "P0², P1², C², D² idempotent; A², Ā² = Z",
    );
    r
}

/// Lexicographic successor; `false` once the last permutation is reached.
pub fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut v: Vec<usize> = (0..n).collect();
    let mut out = vec![Permutation::from_images(v.clone()).expect("identity")];
    while next_permutation(&mut v) {
        out.push(Permutation::from_images(v.clone()).expect("bijection"));
    }
    out
}

pub fn flows() -> Report {
    let mut r = Report::new("flows");
    for rank in [2usize, 3] {
        let perms = all_permutations(1 << rank);
        let dim = 1u64 << rank;
        let mut worst = 0;
        let mut reversible = true;
        for p in &perms {
            let flow = PermutationFlow::state(rank, p.clone()).expect("valid flow");
            let inv = flow.inverse();
            for k in 0..dim {
                worst = worst.max(flow.recurrence_time(k));
                reversible &= inv.step(flow.step(k)) == k;
            }
        }
        r.check(
            format!("recurrence rank {rank}"),
            worst <= dim,
            format!("{} flows, longest return {worst} ≤ {dim}", perms.len()),
        );
        r.check(
            format!("reversibility rank {rank}"),
            reversible,
            "P⁻¹(P(k)) = k",
        );
    }
    for rank in 1..=5usize {
        let perms = all_permutations(rank);
        let conserved = perms.iter().all(|p| {
            let flow = PermutationFlow::signal(p.clone()).expect("valid flow");
            (0..flow.dim()).all(|k| signality_of_index(flow.step(k)) == signality_of_index(k))
        });
        r.check(
            format!("signality conservation rank {rank}"),
            conserved,
            format!("{} signal flows", perms.len()),
        );
    }
    let c2 = count_dynamics(2);
    let c3 = count_dynamics(3);
    r.expect_eq("dynamics count rank 2", &c2.all_maps, &256u32.into());
    r.expect_eq("dynamics count rank 3", &c3.all_maps, &16_777_216u32.into());
    r.expect_eq(
        "permutation flows rank 2",
        &c2.permutation_flows,
        &24u32.into(),
    );
    r.expect_eq("signal flows rank 2", &c2.signal_flows, &2u32.into());
    r
}

pub fn ev() -> Result<Report, Error> {
    let mut r = Report::new("ev");
    for bomb in [BombKind::Dud, BombKind::Active] {
        let ok = network::ev_network(bomb).compile().is_ok();
        r.check(
            format!("{bomb:?} stages isometric"),
            ok,
            "compiled stage maps",
        );
    }
    let dud = network::run_ev(&EvSetting::Bomb(BombKind::Dud))?;
    r.expect_eq("dud P(Explode)", &dud.explode, &Rat::zero());
    r.expect_eq("dud P(D6)", &dud.d6, &Rat::one());
    r.expect_eq("dud P(D7)", &dud.d7, &Rat::zero());
    let dud_final = network::ev_scenario(BombKind::Dud)
        .run(None)?
        .final_state()
        .clone();
    let a6 = Labstate::vacuum(1..=7).apply_creation(6);
    let phase = a6.phase_relative_to(&dud_final);
    r.check(
        "dud final state ∝ A6|0)",
        phase.is_some(),
        format!(
            "{dud_final}, phase {}",
            phase.map(|p| p.to_string()).unwrap_or_else(|| "-".into())
        ),
    );

    let act = network::run_ev(&EvSetting::Bomb(BombKind::Active))?;
    r.expect_eq("active P(Explode)", &act.explode, &Rat::new(1, 2));
    r.expect_eq("active P(D6)", &act.d6, &Rat::new(1, 4));
    r.expect_eq("active P(D7)", &act.d7, &Rat::new(1, 4));

    for w in [Rat::zero(), Rat::new(1, 2), Rat::one()] {
        let mix = network::run_ev(&EvSetting::Mixture(w.clone()))?;
        let wd = Rat::one() - &w;
        r.expect_eq(
            &format!("mixture ω_A={w} P(D6)"),
            &mix.d6,
            &(&w / &Rat::int(4) + wd),
        );
        r.expect_eq(
            &format!("mixture ω_A={w} P(D7)"),
            &mix.d7,
            &(&w / &Rat::int(4)),
        );
    }

    let one = network::stockpile_yield(Sweeps::Count(1))?;
    let limit = network::stockpile_yield(Sweeps::Limit)?;
    r.expect_eq("stockpile one sweep", &one, &Rat::new(1, 4));
    r.expect_eq("stockpile limit", &limit, &Rat::new(1, 3));
    let partial: Vec<Rat> = (1..=12)
        .map(|n| network::stockpile_yield(Sweeps::Count(n)))
        .collect::<Result<_, _>>()?;
    let monotone = partial.windows(2).all(|w| w[0] < w[1]) && partial.iter().all(|p| *p < limit);
    r.check(
        "stockpile monotone, bounded",
        monotone,
        format!("12 sweeps reach {}", partial[11]),
    );
    Ok(r)
}

/// Expected amplitudes of the Hardy state after two stages.
pub fn expected_hardy_state() -> Vec<(Amp, Monomial)> {
    let a = |s: &str| s.parse::<Amp>().expect("literal");
    vec![
        (
            a("(2/4)"),
            Monomial(vec![Generator::Decommission(3), Generator::Decommission(4)]),
        ),
        (a("(i/4)"), Monomial::create(&[6, 8])),
        (a("(-1/4)"), Monomial::create(&[7, 8])),
        (a("(-3/4)"), Monomial::create(&[6, 9])),
        (a("(i/4)"), Monomial::create(&[7, 9])),
    ]
}

pub fn hardy() -> Result<Report, Error> {
    let mut r = Report::new("hardy");
    r.check(
        "stages isometric",
        network::hardy_network().compile().is_ok(),
        "compiled stage maps",
    );
    let rep = network::run_hardy()?;
    let sixteenth = Rat::new(1, 16);
    r.expect_eq("P(6,8)", &rep.p68, &sixteenth);
    r.expect_eq("P(7,8)", &rep.p78, &sixteenth);
    r.expect_eq("P(7,9)", &rep.p79, &sixteenth);
    r.expect_eq("P(6,9)", &rep.p69, &Rat::new(9, 16));
    r.expect_eq("P(Annihilation)", &rep.annihilation, &Rat::new(1, 4));
    r.expect_eq("total", &rep.total(), &Rat::one());
    r.check("P(7,8) ≠ 0", !rep.p78.is_zero(), rep.p78.to_string());

    let want = Labstate::from_terms(1..=9, &expected_hardy_state());
    r.check(
        "intermediate state",
        rep.final_state == want,
        rep.final_state.to_string(),
    );

    let swapped = network::hardy_network().relabel(&network::hardy_arm_swap());
    let initial = Labstate::vacuum(1..=9).apply_creation(1);
    let sc = network::Scenario::from_network(&swapped, &initial, network::hardy_outcomes())?;
    let run = sc.run(None)?;
    let symmetric = [
        ("6,8", &rep.p68),
        ("7,8", &rep.p78),
        ("7,9", &rep.p79),
        ("6,9", &rep.p69),
        ("Annihilation", &rep.annihilation),
    ]
    .iter()
    .all(|(n, p)| run.probability(n) == Some(*p));
    r.check(
        "arm-swap symmetry",
        symmetric,
        "electron/positron interchange",
    );
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_enumeration() {
        assert_eq!(all_permutations(4).len(), 24);
        assert_eq!(all_permutations(1).len(), 1);
    }

    #[test]
    fn unknown_block() {
        assert!(run_block("nope").is_err());
    }
}
