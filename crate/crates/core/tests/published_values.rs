//! Closed-form values for small rank, checked verbatim.

use zonal_core::braiding::{build_r, vector_rep_r};
use zonal_core::cycles::{braid_eigen_check, cycle_braid_operator, encode_cycle, CycleForm};
use zonal_core::exactq::{rat, FracMatrix, QFraction, QScalar};
use zonal_core::repcore::{act_e, act_f, act_k, contravariant_form, dual_image, FWord, ModuleVector, RootData};

fn b1() -> QScalar {
    &QScalar::q_pow(1, 2) - &QScalar::q_pow(-1, 2)
}

#[test]
fn point_weight_actions() {
    let l = RootData::new(1).unwrap().lambda_point();
    let v = ModuleVector::highest(l.clone(), false);
    assert_eq!(act_k(1, 1, &v).unwrap(), v.scale(&QScalar::q_pow(1, 4)));
    let f1v = act_f(1, &v).unwrap();
    assert_eq!(act_e(1, &f1v).unwrap(), v.scale(&b1()));
    assert_eq!(contravariant_form(&v, &v).unwrap(), QScalar::one());
    assert_eq!(contravariant_form(&f1v, &f1v).unwrap(), b1());
}

#[test]
fn contravariant_duals() {
    let l = RootData::new(1).unwrap().lambda_point();
    let v = ModuleVector::highest(l.clone(), false);
    assert_eq!(dual_image(&v).unwrap(), ModuleVector::highest(l.clone(), true));
    let f1v = act_f(1, &v).unwrap();
    assert_eq!(dual_image(&f1v).unwrap(), ModuleVector::word(l, true, FWord::new(&[1]), b1()));
}

#[test]
fn top_block_scalar() {
    let l = RootData::new(1).unwrap().lambda_point();
    let mut r = build_r(&l, &l, 2, "raise-first").unwrap();
    let b = r.block(&vec![0, 0]).unwrap();
    assert_eq!(b.matrix, FracMatrix::identity(1).scale(&QFraction::from(QScalar::q_pow(1, 1))));
}

#[test]
fn two_term_cycle_vector() {
    let v = encode_cycle(1, CycleForm::Dual).unwrap();
    assert_eq!(v.vector.len(), 2);
    let e = FWord::empty();
    let f = FWord::string(1);
    assert_eq!(v.vector.coeff(&[e.clone(), f.clone(), e.clone()]), -QScalar::q_pow(-1, 4));
    assert_eq!(v.vector.coeff(&[e.clone(), e, f]), QScalar::q_pow(1, 4));
}

#[test]
fn braiding_two_points() {
    let v = encode_cycle(1, CycleForm::Dual).unwrap();
    let mut r = cycle_braid_operator(1).unwrap();
    assert_eq!(braid_eigen_check(&v, 1, &mut r).unwrap(), QScalar::from_int(-1));
    let x = r.apply_pr(1, &v.vector).unwrap();
    assert_eq!(r.apply_pr(1, &x).unwrap(), v.vector);
}

#[test]
fn vector_representation_entries() {
    let n = 2;
    let m = n + 1;
    let r = vector_rep_r(n);
    let h = QFraction::from(QScalar::q_pow(1, 2));
    for k in 0..m {
        assert_eq!(r.get(k * m + k, k * m + k), &QFraction::from(QScalar::q_pow(1, 1)));
        for l in 0..m {
            if k == l {
                continue;
            }
            // column e_k ⊗ e_l
            assert_eq!(r.get(k * m + l, k * m + l), &h);
            let cross = r.get(l * m + k, k * m + l);
            if l < k {
                assert_eq!(cross, &(&h * &QFraction::from(QScalar::bracket(&rat(1, 1)))));
            } else {
                assert!(cross.is_zero());
            }
        }
    }
}
