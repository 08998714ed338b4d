//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;

use labstate::bits::{self, qubit, BASIC_FOUR};
use labstate::classical::{count_dynamics, Permutation, PermutationFlow};
use labstate::labstate::Generator;
use labstate::network::{self, BombKind, EvSetting, Sweeps};
use labstate::register::signality_of_index;
use labstate::{Amp, BitOp, Labstate, Monomial, PBitState, Question, Rat};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn same<T: PartialEq + std::fmt::Display>(what: &str, got: &T, want: &T) -> Outcome {
    ensure(got == want, || format!("{what}: got {got}, want {want}"))
}

fn operator_tables() -> Outcome {
    use BitOp as B;
    let expected = [
        [B::P0, B::Z, B::A, B::Z],
        [B::Z, B::P1, B::Z, B::A_BAR],
        [B::Z, B::A, B::Z, B::P0],
        [B::A_BAR, B::Z, B::P1, B::Z],
    ];
    let table = bits::product_table(&BASIC_FOUR);
    let q = qubit::table();
    for i in 0..4 {
        for j in 0..4 {
            ensure(table[i][j] == expected[i][j], || {
                format!("bit table entry ({i},{j})")
            })?;
            let image = q[i][j].map(|k| BASIC_FOUR[k]).unwrap_or(B::Z);
            ensure(image == table[i][j], || {
                format!("qubit table entry ({i},{j})")
            })?;
        }
    }
    Ok(())
}

fn bracket_rule() -> Outcome {
    let mut n = 0;
    for i in PBitState::ALL {
        for j in PBitState::ALL {
            ensure(Question(i).bracket(j) == u8::from(i == j), || {
                format!("({i}|{j})")
            })?;
            n += 1;
        }
    }
    same("relations", &n, &16)
}

fn census() -> Outcome {
    let all = bits::enumerate_bitops();
    let distinct: std::collections::BTreeSet<_> = all.iter().copied().collect();
    same("distinct operators", &distinct.len(), &256)?;
    for o2 in &all {
        for o1 in &all {
            let c = bits::compose(*o2, *o1);
            ensure(distinct.contains(&c), || "not closed".into())?;
            ensure(c.matrix() == o2.matrix().mul(&o1.matrix()), || {
                format!("[{}∘{}]", o2.code(), o1.code())
            })?;
        }
    }
    Ok(())
}

fn ev_dud() -> Outcome {
    let r = network::run_ev(&EvSetting::Bomb(BombKind::Dud)).map_err(|e| e.to_string())?;
    same("P(Explode)", &r.explode, &Rat::zero())?;
    same("P(D6)", &r.d6, &Rat::one())?;
    same("P(D7)", &r.d7, &Rat::zero())?;
    let run = network::ev_scenario(BombKind::Dud)
        .run(None)
        .map_err(|e| e.to_string())?;
    let a6 = Labstate::vacuum(1..=7).apply_creation(6);
    ensure(run.final_state().eq_up_to_phase(&a6), || {
        format!("final state {}", run.final_state())
    })
}

fn ev_active() -> Outcome {
    let r = network::run_ev(&EvSetting::Bomb(BombKind::Active)).map_err(|e| e.to_string())?;
    same("P(Explode)", &r.explode, &Rat::new(1, 2))?;
    same("P(D6)", &r.d6, &Rat::new(1, 4))?;
    same("P(D7)", &r.d7, &Rat::new(1, 4))
}

fn ev_mixture() -> Outcome {
    for w in [Rat::zero(), Rat::new(1, 2), Rat::one()] {
        let r = network::run_ev(&EvSetting::Mixture(w.clone())).map_err(|e| e.to_string())?;
        let quarter = &w / &Rat::int(4);
        same(
            &format!("ω_A={w} P(D6)"),
            &r.d6,
            &(&quarter + &(Rat::one() - &w)),
        )?;
        same(&format!("ω_A={w} P(D7)"), &r.d7, &quarter)?;
    }
    Ok(())
}

fn stockpile() -> Outcome {
    let y = |s| network::stockpile_yield(s).map_err(|e| e.to_string());
    same("one sweep", &y(Sweeps::Count(1))?, &Rat::new(1, 4))?;
    let limit = y(Sweeps::Limit)?;
    same("limit", &limit, &Rat::new(1, 3))?;
    let mut prev = Rat::zero();
    for n in 1..=20 {
        let cur = y(Sweeps::Count(n))?;
        ensure(cur > prev && cur < limit, || format!("sweep {n}: {cur}"))?;
        prev = cur;
    }
    Ok(())
}

fn hardy() -> Outcome {
    let r = network::run_hardy().map_err(|e| e.to_string())?;
    let s = Rat::new(1, 16);
    same("P(6,8)", &r.p68, &s)?;
    same("P(7,8)", &r.p78, &s)?;
    same("P(7,9)", &r.p79, &s)?;
    same("P(6,9)", &r.p69, &Rat::new(9, 16))?;
    same("P(Annihilation)", &r.annihilation, &Rat::new(1, 4))?;
    same("sum", &r.total(), &Rat::one())?;
    ensure(!r.p78.is_zero(), || "P(7,8) vanished".into())
}

fn hardy_state() -> Outcome {
    let r = network::run_hardy().map_err(|e| e.to_string())?;
    let amp = |s: &str| s.parse::<Amp>().unwrap();
    let want = [
        (
            amp("(2/4)"),
            Monomial(vec![Generator::Decommission(3), Generator::Decommission(4)]),
        ),
        (amp("(i/4)"), Monomial::create(&[6, 8])),
        (amp("(-1/4)"), Monomial::create(&[7, 8])),
        (amp("(-3/4)"), Monomial::create(&[6, 9])),
        (amp("(i/4)"), Monomial::create(&[7, 9])),
    ];
    for (a, m) in &want {
        same(
            &format!("coefficient of {m}"),
            &r.final_state.coefficient(m),
            a,
        )?;
    }
    same("term count", &r.final_state.len(), &want.len())
}

fn properties() -> Outcome {
    let nets = [
        network::ev_network(BombKind::Dud),
        network::ev_network(BombKind::Active),
        network::hardy_network(),
    ];
    for net in &nets {
        for (i, m) in net.compile().map_err(|e| e.to_string())?.iter().enumerate() {
            ensure(m.check_isometry(), || {
                format!("stage {} not isometric", i + 1)
            })?;
        }
    }

    let check_flow = |p: Vec<usize>, rank: usize| -> Outcome {
        let flow = PermutationFlow::state(
            rank,
            Permutation::from_images(p).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        for k in 0..flow.dim() {
            let t = flow.recurrence_time(k);
            ensure((1..=flow.dim()).contains(&t), || {
                format!("state {k} returns after {t}")
            })?;
        }
        Ok(())
    };
    let mut p: Vec<usize> = (0..4).collect();
    let mut rank2 = 0;
    loop {
        check_flow(p.clone(), 2)?;
        rank2 += 1;
        if !labstate::verify::next_permutation(&mut p) {
            break;
        }
    }
    same("rank-2 flows", &rank2, &24)?;
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..10_000 {
        let mut p: Vec<usize> = (0..8).collect();
        p.shuffle(&mut rng);
        check_flow(p, 3)?;
    }

    for r in 1..=5usize {
        let mut p: Vec<usize> = (0..r).collect();
        loop {
            let flow =
                PermutationFlow::signal(Permutation::from_images(p.clone()).unwrap()).unwrap();
            for k in 0..flow.dim() {
                ensure(
                    signality_of_index(flow.step(k)) == signality_of_index(k),
                    || format!("rank {r} {p:?} at {k}"),
                )?;
            }
            if !labstate::verify::next_permutation(&mut p) {
                break;
            }
        }
    }

    same(
        "maps at rank 2",
        &count_dynamics(2).all_maps,
        &256u32.into(),
    )?;
    same(
        "maps at rank 3",
        &count_dynamics(3).all_maps,
        &16_777_216u32.into(),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("operator tables", operator_tables),
        ("bracket rule", bracket_rule),
        ("bit-operator census", census),
        ("EV dud run", ev_dud),
        ("EV active run", ev_active),
        ("EV mixture", ev_mixture),
        ("stockpile yield", stockpile),
        ("Hardy run", hardy),
        ("Hardy intermediate state", hardy_state),
        ("property suite", properties),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("PASS {:>2} {name}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
