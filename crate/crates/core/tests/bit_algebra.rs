use labstate::bits::{self, qubit, BitMatrix, BASIC_FOUR};
use labstate::{BitOp, PBitState, Question};
use proptest::prelude::*;

fn op() -> impl Strategy<Value = BitOp> {
    (0u8..=255).prop_map(BitOp::from_code)
}

fn state() -> impl Strategy<Value = PBitState> {
    proptest::sample::select(PBitState::ALL.to_vec())
}

#[test]
fn boolean_laws_over_all_triples() {
    use PBitState::*;
    for a in PBitState::ALL {
        assert_eq!(a.complement().complement(), a);
        assert_eq!(a.union(Empty), a);
        assert_eq!(a.intersect(Faulty), a);
        assert_eq!(a.union(a.complement()), Faulty);
        assert_eq!(a.intersect(a.complement()), Empty);
        for b in PBitState::ALL {
            assert_eq!(a.union(b), b.union(a));
            assert_eq!(a.intersect(b), b.intersect(a));
            assert_eq!(
                a.union(b).complement(),
                a.complement().intersect(b.complement())
            );
            assert_eq!(
                a.intersect(b).complement(),
                a.complement().union(b.complement())
            );
            assert_eq!(a.union(a.intersect(b)), a);
            for c in PBitState::ALL {
                assert_eq!(a.union(b.intersect(c)), a.union(b).intersect(a.union(c)));
                assert_eq!(
                    a.intersect(b.union(c)),
                    a.intersect(b).union(a.intersect(c))
                );
                assert_eq!(a.union(b).union(c), a.union(b.union(c)));
            }
        }
    }
    assert_eq!(Ground.union(Signal), Faulty);
    assert_eq!(Ground.intersect(Signal), Empty);
}

#[test]
fn question_answers_only_itself() {
    for q in PBitState::ALL {
        for s in PBitState::ALL {
            assert_eq!(Question(q).bracket(s), u8::from(q == s));
            assert_eq!(bits::bracket(Question(q), s), u8::from(q == s));
        }
    }
}

#[test]
fn named_images() {
    use PBitState::*;
    let want = [
        (BitOp::I, [Ground, Signal, Faulty, Empty]),
        (BitOp::Z, [Empty; 4]),
        (BitOp::P0, [Ground, Empty, Empty, Empty]),
        (BitOp::P1, [Empty, Signal, Empty, Empty]),
        (BitOp::A, [Empty, Ground, Empty, Empty]),
        (BitOp::A_BAR, [Signal, Empty, Empty, Empty]),
        (BitOp::C, [Ground; 4]),
        (BitOp::D, [Faulty, Faulty, Faulty, Empty]),
    ];
    for (op, image) in want {
        assert_eq!(op.image(), image, "{}", op.name().unwrap_or("?"));
    }
}

#[test]
fn every_matrix_product_agrees_with_composition() {
    let all = bits::enumerate_bitops();
    assert_eq!(all.len(), 256);
    for o2 in &all {
        for o1 in &all {
            let product: BitMatrix = o2.matrix().mul(&o1.matrix());
            assert!(product.is_deterministic());
            assert_eq!(product.to_bitop(), Some(bits::compose(*o2, *o1)));
        }
    }
}

#[test]
fn basic_four_products() {
    let t = bits::product_table(&BASIC_FOUR);
    assert_eq!(t[0][2], BitOp::A); // P0·A
    assert_eq!(t[2][3], BitOp::P0); // A·Ā
    assert_eq!(t[3][2], BitOp::P1); // Ā·A
    assert_eq!(t[3][0], BitOp::A_BAR); // Ā·P0
    assert_eq!(t[1][3], BitOp::A_BAR); // P1·Ā
    let q = qubit::table();
    for i in 0..4 {
        for j in 0..4 {
            let mapped = q[i][j].map(|k| BASIC_FOUR[k]).unwrap_or(BitOp::Z);
            assert_eq!(mapped, t[i][j], "row {i}, column {j}");
        }
    }
}

#[test]
fn rendered_table_is_aligned() {
    let text = bits::render_product_table(&BASIC_FOUR);
    let widths: Vec<usize> = text.lines().map(|l| l.chars().count()).collect();
    assert!(widths.windows(2).all(|w| w[0] == w[1]), "{text}");
    assert_eq!(text.lines().count(), 6);
}

proptest! {
    #[test]
    fn composition_is_associative(a in op(), b in op(), c in op()) {
        prop_assert_eq!(bits::compose(a, bits::compose(b, c)), bits::compose(bits::compose(a, b), c));
    }

    #[test]
    fn identity_and_zero(a in op()) {
        prop_assert_eq!(bits::compose(a, BitOp::I), a);
        prop_assert_eq!(bits::compose(BitOp::I, a), a);
        prop_assert_eq!(bits::compose(a, BitOp::Z).apply(PBitState::Ground), a.apply(PBitState::Empty));
    }

    #[test]
    fn composition_acts_right_to_left(a in op(), b in op(), s in state()) {
        prop_assert_eq!(bits::compose(a, b).apply(s), a.apply(b.apply(s)));
        prop_assert_eq!(a.after(&b), bits::compose(a, b));
    }

    #[test]
    fn code_round_trips(a in op()) {
        prop_assert_eq!(BitOp::from_code(a.code()), a);
        prop_assert_eq!(BitOp::from_image(a.image()), a);
    }
}
