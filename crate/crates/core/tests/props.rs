//! Randomized algebraic laws driven by proptest: scalar valuation axioms,
//! polynomial division, and Smith reconstruction over chain rings.

use proptest::prelude::*;

use valrank_core::linalg::{smith_form_zk, ZkMat};
use valrank_core::qpoly::{qpoly_from_ints, QPoly};
use valrank_core::scalar::{Backend, Scalar};
use valrank_core::valuation::Valuation;
use valrank_core::zk::ZkRing;

fn padic_scalar() -> impl Strategy<Value = Scalar> {
    (-200i64..=200, (1i64..=200), prop::bool::ANY, -4i64..=4).prop_map(
        |(num, den, neg_den, shift)| {
            let b = Backend::padic(3).unwrap();
            let den = if neg_den { -den } else { den };
            Scalar::from_int(b, num)
                .div(&Scalar::from_int(b, den))
                .unwrap()
                .mul(&Scalar::uniformizer_pow(b, shift))
        },
    )
}

proptest! {
    #[test]
    fn padic_valuation_laws(a in padic_scalar(), b in padic_scalar()) {
        let (va, vb) = (a.valuation(), b.valuation());
        prop_assert_eq!(a.mul(&b).valuation(), va + vb);
        let sum = a.add(&b).valuation();
        prop_assert!(sum >= va.min(vb));
        if va != vb {
            prop_assert_eq!(sum, va.min(vb));
        }
        prop_assert_eq!(a.sub(&a).valuation(), Valuation::Infinite);
    }

    #[test]
    fn qpoly_division_reconstructs(
        a in prop::collection::vec(-9i64..=9, 0..7),
        b in prop::collection::vec(-9i64..=9, 1..5),
    ) {
        let a = qpoly_from_ints(&a);
        let b = qpoly_from_ints(&b);
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b);
        prop_assert_eq!(q.mul(&b).add(&r), a);
        prop_assert!(r.degree().map(|d| d < b.degree().unwrap()).unwrap_or(true));
    }

    #[test]
    fn qpoly_gcd_divides_both(
        a in prop::collection::vec(-4i64..=4, 1..5),
        b in prop::collection::vec(-4i64..=4, 1..5),
    ) {
        let a = qpoly_from_ints(&a);
        let b = qpoly_from_ints(&b);
        let g = a.gcd(&b);
        if g.is_zero() {
            prop_assert!(a.is_zero() && b.is_zero());
        } else {
            prop_assert!(a.div_rem(&g).1.is_zero());
            prop_assert!(b.div_rem(&g).1.is_zero());
            prop_assert_eq!(g.leading().unwrap(), &QPoly::one().coeff(0));
        }
    }

    #[test]
    fn smith_reconstruction_over_z8(
        entries in prop::collection::vec(0u64..8, 1..=16),
        rows in 1usize..=4,
    ) {
        let ring = ZkRing::new(2, 3).unwrap();
        prop_assume!(entries.len() % rows == 0);
        let cols = entries.len() / rows;
        prop_assume!(cols >= 1 && cols <= 4);
        let m = ZkMat::new(ring, rows, cols, entries);
        let snf = smith_form_zk(&m);
        prop_assert_eq!(snf.left.mul(&m).mul(&snf.right), snf.diagonal);
        prop_assert!(snf.divisor_valuations.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn shared_types_are_thread_safe() {
    // the concurrency contract: descriptors and values are immutable and
    // usable from any thread
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<valrank_core::chain::GaloisRing>();
    assert_send_sync::<valrank_core::chain::GrElem>();
    assert_send_sync::<valrank_core::skew::SigmaPoly>();
    assert_send_sync::<valrank_core::scalar::Scalar>();
    assert_send_sync::<valrank_core::matrix::Matrix>();
    assert_send_sync::<valrank_core::building::LatticeClass>();
    assert_send_sync::<valrank_core::codes::CodeSpec>();
}
