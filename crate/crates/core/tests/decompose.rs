use proptest::prelude::*;

use loopdeg::catalog::GroupEntry;
use loopdeg::decompose::{decomposable_at, decompose, decompose_rational, decomposable_everywhere, EverywhereCheck};
use loopdeg::papercheck::{RANK66, RANK68};
use loopdeg::{Catalog, DegreeMultiset};

fn ms(s: &str) -> DegreeMultiset {
    s.parse().unwrap()
}

fn sorted(v: &[&str]) -> Vec<String> {
    let mut v: Vec<String> = v.iter().map(|s| s.to_string()).collect();
    v.sort();
    v
}

#[test]
fn listed_products() {
    let catalog = Catalog::builtin();
    let target = ms(RANK66);
    assert!(decompose_rational(&target, &catalog).is_none());
    let at5 = decomposable_at(&target, 5, &catalog).unwrap();
    assert_eq!(at5.degrees(&catalog).unwrap(), target);
    let at23 = decomposable_at(&target, 23, &catalog).unwrap();
    assert_eq!(at23.degrees(&catalog).unwrap(), target);
    assert_eq!(decompose_rational(&ms("2,3"), &catalog).unwrap().sorted_parts(), sorted(&["W(A2)"]));
    assert!(decompose_rational(&ms("3"), &catalog).is_none());
}

#[test]
fn everywhere_on_examples() {
    let catalog = Catalog::builtin();
    for s in [RANK66, RANK68] {
        match decomposable_everywhere(&ms(s), &catalog).unwrap() {
            EverywhereCheck::Decomposable { classes } => {
                for c in classes {
                    assert_eq!(c.decomposition.degrees(&catalog).unwrap(), ms(s));
                }
            }
            other => panic!("{s}: {other:?}"),
        }
    }
    assert!(matches!(
        decomposable_everywhere(&ms("3"), &catalog).unwrap(),
        EverywhereCheck::FailsAt { .. }
    ));
}

fn small_pool(catalog: &Catalog, p: u64) -> Vec<&GroupEntry> {
    catalog.entries().iter().filter(|e| e.admissible_at(p) && e.max_degree() <= 12).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn sums_of_parts_decompose(p in prop::sample::select(vec![2u64, 3, 5, 7, 13]), picks in prop::collection::vec(any::<prop::sample::Index>(), 1..5)) {
        let catalog = Catalog::builtin();
        let pool = small_pool(&catalog, p);
        let mut target = DegreeMultiset::new();
        for i in &picks {
            target.add_assign(&i.get(&pool).degrees);
        }
        let d = decompose(&target, pool.iter().copied()).expect("sum of pool entries");
        prop_assert_eq!(d.degrees(&catalog).unwrap(), target);
    }

    #[test]
    fn existence_ignores_pool_order(seed in any::<u64>(), degrees in prop::collection::vec(2u32..=10, 1..7)) {
        use rand::{seq::SliceRandom, SeedableRng};
        let catalog = Catalog::builtin();
        let target = DegreeMultiset::from_degrees(degrees).unwrap();
        let pool = small_pool(&catalog, 5);
        let mut shuffled = pool.clone();
        shuffled.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed));
        let a = decompose(&target, pool.iter().copied());
        let b = decompose(&target, shuffled.iter().copied());
        prop_assert_eq!(a.is_some(), b.is_some());
        if let Some(b) = b {
            prop_assert_eq!(b.degrees(&catalog).unwrap(), target);
        }
    }
}
