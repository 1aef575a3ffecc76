mod common;

use fusion6j_core::duality::{choose_mu, dimensions, paired_roots, user_mu, MuPolicy};
use fusion6j_core::partial::*;
use fusion6j_core::scalar::{Field, Float, RootChoice, Scalar};

#[test]
fn rep_a4_has_multiplicity_and_passes_pentagon() {
    let c = common::rep_a4();
    assert_eq!(c.ring().n(3, 3, 3), 2);
    assert!(c.ring().validate().is_ok());
    assert_eq!(c.ring().block_dims(3, 3, 3, 3), (7, 7));
    let p = c.check_pentagon(None);
    assert!(p.passed, "{p:?}");
    assert!(c.check_triangle().is_ok());
}

/// Sum over both bracketings, from a hand-written fusion table.
fn block_dims_oracle(n: &[[[usize; 3]; 3]; 3], [i, j, k, l]: [usize; 4]) -> (usize, usize) {
    let right = (0..3).map(|p| n[j][k][p] * n[i][p][l]).sum();
    let left = (0..3).map(|q| n[i][j][q] * n[q][k][l]).sum();
    (right, left)
}

#[test]
fn rank3_block_dimensions_match_oracle() {
    // 1, x, y with x x = 1 + 2x + y, x y = y x = x, y y = 1.
    let mut n = [[[0usize; 3]; 3]; 3];
    for (i, row) in n.iter_mut().enumerate() {
        row[0][i] = 1;
    }
    n[0] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    n[1][1] = [1, 2, 1];
    n[1][2][1] = 1;
    n[2][1][1] = 1;
    n[2][2][0] = 1;
    let ring = fusion6j_core::builtin::rank3_ring();
    assert_eq!(ring.block_dims(1, 1, 1, 1), (6, 6));
    for q in ring.block_quads() {
        assert_eq!(ring.block_dims(q[0], q[1], q[2], q[3]), block_dims_oracle(&n, q), "{q:?}");
    }
}

#[test]
fn rep_a4_partial_duals() {
    let c = common::rep_a4();
    let mut rc = RootChoice::new(Field::C, 1e-9);
    for mu in [
        choose_mu(&c, MuPolicy::AllOnes, &mut rc).unwrap(),
        choose_mu(&c, MuPolicy::Balanced, &mut rc).unwrap(),
        user_mu(&c, vec![Float::one(), Float::new(2.0, 0.0), Float::new(0.0, 1.0), Float::new(-3.0, 0.5)]).unwrap(),
    ] {
        let dims = dimensions(&c, &mu).unwrap();
        let duals = PartialDuals::new(&c, &mu).unwrap();
        for space in HomSpaceRef::all(c.ring()) {
            let dd = double_dual_map(&c, &duals, &dims, space).unwrap();
            assert!(dd.matches_closed_form && dd.quadruple_ok, "{space:?}");
            if space.orientation == Orientation::ToK {
                let it = iterated_rl(&c, &mu, &duals, space).unwrap();
                assert!(it.rl_matches && it.lr_matches && it.inverse_pair, "{space:?}");
            }
        }
        let s3 = check_s3(&c, &duals).unwrap();
        assert!(s3.l_squared_identity && s3.r_squared_identity);
        assert_eq!(s3.braid_relation, s3.double_dual_identity);
        let pr = paired_roots(&c, &dims, &mut rc).unwrap();
        let table = epsilon_table(&c, &pr).unwrap();
        assert!(sum_rule_violations(&c, &pr, &table).is_empty());
        assert!(t_matrix_violations(&c, &pr, &table).is_empty());
        assert!(table.all_plus());
    }
}
