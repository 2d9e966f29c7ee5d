mod common;

use proptest::prelude::*;
use rlpsi::{
    balance_runs, verify_balanced, Convention, MoveTable, OracleKind, PermutationOracle,
    RunDecomposition, SuffixStructures, Text,
};

const KINDS: [OracleKind; 4] = [OracleKind::Lf, OracleKind::Phi, OracleKind::PhiInv, OracleKind::Psi];

fn naive_suffix_sa(s: &[u8]) -> Vec<usize> {
    let mut sa: Vec<usize> = (0..s.len()).collect();
    sa.sort_by(|&a, &b| s[a..].cmp(&s[b..]));
    sa
}

fn is_permutation(v: &[usize]) -> bool {
    let mut seen = vec![false; v.len()];
    v.iter().all(|&x| x < v.len() && !std::mem::replace(&mut seen[x], true))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn suffix_order_matches_comparison_sort(bytes in proptest::collection::vec(b'a'..b'e', 1..512)) {
        let t = Text::new(&bytes, Convention::SuffixOrder).unwrap();
        let s = SuffixStructures::build(&t);
        let expected = naive_suffix_sa(t.symbols());
        prop_assert_eq!(s.sa(), expected.as_slice());
    }

    #[test]
    fn oracle_laws(bytes in proptest::collection::vec(b'a'..b'd', 1..300), rotation in any::<bool>()) {
        let conv = if rotation { Convention::RotationOrder } else { Convention::SuffixOrder };
        let t = Text::new(&bytes, conv).unwrap();
        let s = SuffixStructures::build(&t);
        let n = t.len();
        for kind in KINDS {
            prop_assert!(is_permutation(s.oracle(kind).values()));
        }
        let psi = s.oracle(OracleKind::Psi);
        let lf = s.oracle(OracleKind::Lf);
        let phi = s.oracle(OracleKind::Phi);
        let phi_inv = s.oracle(OracleKind::PhiInv);
        for i in 0..n {
            prop_assert_eq!(psi.get(lf.get(i)), i);
            prop_assert_eq!(lf.get(psi.get(i)), i);
            prop_assert_eq!(phi_inv.get(phi.get(i)), i);
        }
        // ψ is one n-cycle.
        let mut seen = vec![false; n];
        let mut j = 0;
        for _ in 0..n {
            prop_assert!(!std::mem::replace(&mut seen[j], true));
            j = psi.get(j);
        }
        prop_assert_eq!(j, 0);
        prop_assert_eq!(
            s.bwt_runs(),
            (0..n).filter(|&i| i == 0 || s.bwt()[i] != s.bwt()[i - 1]).count()
        );
    }

    #[test]
    fn psi_runs_bounded_by_bwt_runs(bytes in proptest::collection::vec(b'a'..b'f', 1..400), rotation in any::<bool>()) {
        let conv = if rotation { Convention::RotationOrder } else { Convention::SuffixOrder };
        let t = Text::with_sentinel(&bytes, conv).unwrap();
        let s = SuffixStructures::build(&t);
        let psi = s.oracle(OracleKind::Psi);
        prop_assert!(RunDecomposition::minimal(&psi).len() <= s.bwt_runs());
        prop_assert!(s.natural_runs(&psi).len() <= s.bwt_runs());
        let lf = s.oracle(OracleKind::Lf);
        prop_assert_eq!(s.natural_runs(&lf).len(), s.bwt_runs());
    }

    #[test]
    fn minimal_decomposition_is_minimal(values in Just((0..200usize).collect::<Vec<_>>()).prop_shuffle()) {
        let p = PermutationOracle::from_values(OracleKind::Psi, values.clone()).unwrap();
        let runs = RunDecomposition::minimal(&p);
        let heads = runs.p_heads();
        prop_assert_eq!(heads[0], 0);
        for i in 1..values.len() {
            let is_head = heads.binary_search(&i).is_ok();
            prop_assert_eq!(is_head, values[i] != values[i - 1] + 1);
        }
        for (h, q) in heads.iter().zip(runs.q_values()) {
            prop_assert_eq!(values[*h], *q);
        }
    }
}

#[test]
fn example_text_shape() {
    let t = Text::new(common::EXAMPLE_TEXT, Convention::SuffixOrder).unwrap();
    assert_eq!((t.len(), t.sigma()), (45, 5));
    let rot = Text::new(common::EXAMPLE_TEXT, Convention::RotationOrder).unwrap();
    let s = SuffixStructures::build(&rot);
    assert_eq!(s.bwt_runs(), 13);
    let bwt_heads: Vec<usize> = (0..45)
        .filter(|&i| i == 0 || s.bwt()[i] != s.bwt()[i - 1])
        .collect();
    assert_eq!(bwt_heads, common::positions_of_ones(common::EXAMPLE_BL));
    let psi = s.oracle(OracleKind::Psi);
    assert_eq!(
        s.natural_runs(&psi).p_heads(),
        common::positions_of_ones(common::EXAMPLE_BF).as_slice()
    );
}

#[test]
fn corpus_balancing_and_move_tables() {
    for (k, (_, bytes)) in common::corpus(99, 60, 2000).into_iter().enumerate() {
        let t = Text::with_sentinel(&bytes, Convention::SuffixOrder).unwrap();
        let s = SuffixStructures::build(&t);
        let d = [2, 3, 4, 8][k % 4];
        for kind in KINDS {
            let perm = s.oracle(kind);
            let runs = s.natural_runs(&perm);
            let b = balance_runs(&runs, &perm, d).unwrap();
            let report = verify_balanced(&b, &perm);
            assert!(report.pass, "text {k} {kind:?}: {report:?}");
            let table = MoveTable::build(&b);
            for j in 0..perm.len() {
                let step = table.step(table.locate(j).unwrap()).unwrap();
                assert_eq!(step.position, perm.get(j));
                assert!(step.probes <= 2 * d);
            }
            // ψ's table iterated from the row of text position 0 walks the whole cycle.
            if kind == OracleKind::Psi {
                let mut c = table.locate(s.isa()[0]).unwrap();
                let mut seen = vec![false; perm.len()];
                for _ in 0..perm.len() {
                    let step = table.step(c).unwrap();
                    assert!(!std::mem::replace(&mut seen[step.position], true));
                    c = step.coords;
                }
            }
        }
    }
}
