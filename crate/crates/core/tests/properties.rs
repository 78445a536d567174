use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qlogic::formula::{parse, print, restrict};
use qlogic::subspace::random_subspace_with;
use qlogic::{evaluate, Environment, Formula, Subspace, Tolerance};

const VARS: [&str; 3] = ["a", "b", "c"];

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Top),
        Just(Formula::Bot),
        prop::sample::select(&VARS[..]).prop_map(Formula::var),
    ];
    leaf.prop_recursive(5, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| Formula::or(l, r)),
        ]
    })
}

fn environment(n: usize, seed: u64, tol: &Tolerance) -> Environment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut env = Environment::new(n);
    for (i, v) in VARS.iter().enumerate() {
        let d = (seed as usize + 3 * i) % (n + 1);
        env.bind(*v, random_subspace_with(&mut rng, n, d, tol)).unwrap();
    }
    env
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(f in formula()) {
        prop_assert_eq!(parse(&print(&f)).unwrap(), f);
    }

    #[test]
    fn printed_form_is_a_fixed_point(f in formula()) {
        let once = print(&f);
        prop_assert_eq!(print(&parse(&once).unwrap()), once);
    }

    #[test]
    fn hash_cons_keeps_meaning(f in formula()) {
        let shared = f.hash_cons();
        prop_assert_eq!(&shared, &f);
        prop_assert!(shared.dag_size() as u64 <= shared.tree_size());
    }

    #[test]
    fn nnf_is_nnf_and_idempotent(f in formula()) {
        let g = f.nnf();
        prop_assert!(g.is_nnf());
        prop_assert_eq!(g.nnf(), g);
    }

    #[test]
    fn nnf_preserves_value(f in formula(), seed in 0u64..1000) {
        let tol = Tolerance::default();
        let env = environment(4, seed, &tol);
        let lhs = evaluate(&f, &env, &tol).unwrap();
        let rhs = evaluate(&f.nnf(), &env, &tol).unwrap();
        prop_assert!(lhs.equal(&rhs, 1e-7).unwrap());
    }

    #[test]
    fn freshen_renames_every_variable(f in formula()) {
        let g = f.freshen("_x").unwrap();
        let vars: Vec<String> = g.vars().into_vec();
        prop_assert!(vars.iter().all(|v| v.ends_with("_x")));
        prop_assert_eq!(vars.len(), f.vars().len());
    }

    #[test]
    fn restrict_rejects_shared_variables(f in formula(), g in formula()) {
        let shared = f.vars().iter().any(|v| g.vars().contains(v));
        prop_assert_eq!(restrict(&f, &g).is_err(), shared);
    }

    #[test]
    fn restricting_to_top_changes_nothing(f in formula(), seed in 0u64..1000) {
        let tol = Tolerance::default();
        let env = environment(3, seed, &tol);
        let r = restrict(&f, &Formula::Top).unwrap();
        let lhs = evaluate(&f, &env, &tol).unwrap();
        let rhs = evaluate(&r, &env, &tol).unwrap();
        prop_assert!(lhs.equal(&rhs, 1e-7).unwrap());
    }

    #[test]
    fn subspace_json_round_trip(seed in 0u64..1000, n in 1usize..6) {
        let tol = Tolerance::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_subspace_with(&mut rng, n, (seed as usize) % (n + 1), &tol);
        let back: Subspace = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        prop_assert!(back.equal(&s, 1e-12).unwrap());
    }

    #[test]
    fn environment_json_round_trip(seed in 0u64..1000) {
        let tol = Tolerance::default();
        let env = environment(3, seed, &tol);
        let back: Environment = serde_json::from_str(&serde_json::to_string(&env).unwrap()).unwrap();
        prop_assert_eq!(back.len(), env.len());
        for (name, s) in env.iter() {
            prop_assert!(back.get(name).unwrap().equal(s, 1e-12).unwrap());
        }
    }
}
