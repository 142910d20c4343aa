use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use bicross::bicross::{Instance, A, B};
use bicross::catalog;
use bicross::group::{parse_cycles, FiniteTable};
use bicross::matched_pair::{factorize, FactorRole, Subgroup};
use bicross::report::ProbeConfig;
use bicross::tensor::{LinOp, Tag};
use bicross::{Group, Scalar};

fn scalar() -> impl Strategy<Value = Scalar> {
    (-20i64..=20, 1i64..=12, -20i64..=20, 1i64..=12).prop_map(|(p, q, r, s)| Scalar::from_parts(p, q, r, s))
}

proptest! {
    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &(-&a), Scalar::zero());
        prop_assert_eq!(&a * &Scalar::one(), a.clone());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), Scalar::one());
            prop_assert_eq!(&(&b / &a) * &a, b.clone());
        }
    }

    #[test]
    fn conjugation_is_an_involutive_automorphism(a in scalar(), b in scalar()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        let n = &a * &a.conj();
        prop_assert!(n.is_nonnegative_real());
        prop_assert_eq!(n, Scalar::from_rational(a.norm_sq()));
    }

    #[test]
    fn serialization_round_trips(a in scalar()) {
        let s = a.to_string();
        let back = Scalar::parse(&s).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(back.to_string(), s);
    }
}

/// Operators of the S3 instance that preserve their leg count, with their input tags.
fn s3_ops(inst: &Instance) -> Vec<LinOp> {
    vec![
        inst.a.antipode.clone(),
        inst.b.antipode.clone(),
        inst.ab.tw.t.clone(),
        inst.ab.tw.r.clone(),
        inst.ab.tw.p.clone(),
        LinOp::flip(A, A),
    ]
}

fn placements(ambient: &[Tag], op: &LinOp) -> Vec<Vec<usize>> {
    let n = ambient.len();
    let mut out = Vec::new();
    let mut legs = vec![0; op.input.len()];
    fn rec(i: usize, n: usize, ambient: &[Tag], op: &LinOp, legs: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == legs.len() {
            out.push(legs.clone());
            return;
        }
        for l in 0..n {
            if ambient[l] == op.input[i] && !legs[..i].contains(&l) {
                legs[i] = l;
                rec(i + 1, n, ambient, op, legs, out);
            }
        }
    }
    rec(0, n, ambient, op, &mut legs, &mut out);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Operators on disjoint legs commute.
    #[test]
    fn disjoint_legs_commute(i in 0usize..6, j in 0usize..6, pi in 0usize..64, pj in 0usize..64, seed in any::<u64>()) {
        let inst = catalog::s3().unwrap();
        let ops = s3_ops(&inst);
        let ambient = vec![A, B, A, B, A];
        let (f, g) = (&ops[i], &ops[j]);
        let pf = placements(&ambient, f);
        let lf = &pf[pi % pf.len()];
        let pg: Vec<_> = placements(&ambient, g).into_iter().filter(|l| l.iter().all(|x| !lf.contains(x))).collect();
        prop_assume!(!pg.is_empty());
        let lg = &pg[pj % pg.len()];
        prop_assume!(f.output.iter().zip(lf).all(|(t, &l)| *t == ambient[l]) && g.output.iter().zip(lg).all(|(t, &l)| *t == ambient[l]));
        let fo = LinOp::on_legs(f, lf, &ambient).unwrap();
        let go = LinOp::on_legs(g, lg, &ambient).unwrap();
        let x = inst.uni.random_vector(&ambient, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(fo.apply(&go.apply(&x).unwrap()).unwrap(), go.apply(&fo.apply(&x).unwrap()).unwrap());
    }

    /// Operators are linear on arbitrary finitely supported vectors.
    #[test]
    fn operators_are_linear(i in 0usize..6, seed in any::<u64>(), c in scalar()) {
        let inst = catalog::s3().unwrap();
        let f = &s3_ops(&inst)[i];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (inst.uni.random_vector(&f.input, &mut rng), inst.uni.random_vector(&f.input, &mut rng));
        let lhs = f.apply(&x.add(&y.scale(&c))).unwrap();
        let rhs = f.apply(&x).unwrap().add(&f.apply(&y).unwrap().scale(&c));
        prop_assert_eq!(lhs, rhs);
    }

    /// Every element of A5 is `k·h` with `k ∈ A4`, `h ∈ ⟨(12345)⟩`, uniquely.
    #[test]
    fn a5_factorizes(idx in 0usize..60) {
        let gens: Vec<Vec<usize>> = ["(123)", "(12345)"].iter().map(|s| parse_cycles(5, s).unwrap()).collect();
        let g = Group::finite("A5", FiniteTable::from_permutations(5, &gens).unwrap());
        let p = |s: &str| g.parse_elem(s).unwrap();
        let k = g.subgroup_generated("K", &[p("(123)"), p("(12)(34)")]).unwrap();
        let h = g.subgroup_generated("H", &[p("(12345)")]).unwrap();
        let x = &g.elements().unwrap()[idx];
        let (kk, hh) = factorize(&g, &Subgroup::finite(k.clone()), &Subgroup::finite(h.clone()), x).unwrap();
        prop_assert!(k.contains(&kk) && h.contains(&hh));
        prop_assert_eq!(&g.mul(&kk, &hh), x);
    }

    /// `Z[1/2] ⋊ Z = K·H` round trips and the derived actions satisfy `hk = (h▸k)(h◂k)`.
    #[test]
    fn dyadic_factorizes(seed in any::<u64>()) {
        let g = Group::semidirect(2).unwrap();
        let k = Subgroup::factor(&g, "K", FactorRole::Normal).unwrap();
        let h = Subgroup::factor(&g, "H", FactorRole::Acting).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = g.random(&mut rng);
        let (kk, hh) = factorize(&g, &k, &h, &x).unwrap();
        prop_assert_eq!(g.mul(&(k.embed)(&kk), &(h.embed)(&hh)), x);

        let inst = catalog::dyadic(2).unwrap();
        let mp = &inst.mp;
        let src = mp.source.as_ref().unwrap();
        let (a, b) = (mp.h.random(&mut rng), mp.k.random(&mut rng));
        let lhs = src.g.mul(&(src.embed_h)(&a), &(src.embed_k)(&b));
        let rhs = src.g.mul(&(src.embed_k)(&mp.tr(&a, &b)), &(src.embed_h)(&mp.tl(&a, &b)));
        prop_assert_eq!(lhs, rhs);
    }

    /// Seeded probe sets are a pure function of the seed and the check id.
    #[test]
    fn probes_are_deterministic(seed in any::<u64>(), n in 1usize..20) {
        let inst = catalog::dyadic(2).unwrap();
        let cfg = ProbeConfig::random(seed, n);
        let a = cfg.probes("x", &inst.uni, &[A, B]);
        let b = cfg.probes("x", &inst.uni, &[A, B]);
        prop_assert_eq!(a.vectors.len(), n);
        prop_assert_eq!(a.vectors, b.vectors);
        prop_assert_eq!(a.desc, b.desc);
    }
}
