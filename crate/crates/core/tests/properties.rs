use proptest::prelude::*;

use walras::auction::{self, AuctionOptions, Direction, Policy, PolicyKind};
use walras::demand;
use walras::equilibrium::{self, classify_verdict};
use walras::generate::{generate, GenerateSpec, Mix};
use walras::lyapunov::{delta_down, delta_up};
use walras::{Instance, ItemSet, PriceOracle, PriceVector, Valuation};

fn gs_instance() -> impl Strategy<Value = Instance> {
    (1usize..=3, 1usize..=3, 1u64..=5, 0usize..3, any::<u64>()).prop_map(|(m, n, max_value, mix, seed)| {
        let mix = [Mix::Additive, Mix::UnitDemand, Mix::Mixed][mix];
        generate(&GenerateSpec {
            m,
            n,
            max_value,
            mix,
            seed,
        })
        .unwrap()
    })
}

/// An instance with a price vector inside its grid.
fn gs_at_price() -> impl Strategy<Value = (Instance, PriceVector)> {
    gs_instance().prop_flat_map(|inst| {
        let b = inst.grid_bound();
        let m = inst.m();
        (Just(inst), proptest::collection::vec(0..=b, m).prop_map(PriceVector::new))
    })
}

/// Monotone table valuation built from nonnegative marginal increments.
fn monotone_table() -> impl Strategy<Value = Valuation> {
    (1usize..=3)
        .prop_flat_map(|m| proptest::collection::vec(0u64..4, 1 << m))
        .prop_map(|bumps| {
            let sets = bumps.len();
            let mut values = vec![0u64; sets];
            for s in 1..sets {
                let below = (0..usize::BITS)
                    .filter(|b| s >> b & 1 == 1)
                    .map(|b| values[s & !(1 << b)])
                    .max()
                    .unwrap_or(0);
                values[s] = below + bumps[s];
            }
            Valuation::table(values).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn requirement_never_exceeds_redundant((inst, p) in gs_at_price()) {
        for s in ItemSet::all(inst.m()) {
            prop_assert!(inst.requirement(&p, s) <= inst.redundant(&p, s));
            prop_assert!(inst.redundant(&p, s) <= inst.n() as u32 * s.len());
        }
    }

    #[test]
    fn one_step_lyapunov_changes((inst, p) in gs_at_price()) {
        for s in ItemSet::all(inst.m()) {
            prop_assert!(delta_up(&inst, &p, s).agrees());
            if p.can_lower(s) {
                prop_assert!(delta_down(&inst, &p, s).unwrap().agrees());
            }
        }
    }

    #[test]
    fn set_systems_sit_inside_their_classes((inst, p) in gs_at_price()) {
        for s in auction::excess_demand_sets(&inst, &p) {
            prop_assert!(demand::classify_set(&inst, &p, s).over);
        }
        for s in auction::dearth_demand_sets(&inst, &p) {
            let c = demand::classify_set(&inst, &p, s);
            prop_assert!(c.under && p.can_lower(s));
        }
        if let Some(c) = auction::minimal_minimizer(&inst, &p) {
            prop_assert!(auction::is_excess_demand(&inst, &p, c.set));
        }
        if let Some(c) = auction::maximal_minimizer(&inst, &p) {
            prop_assert!(auction::is_dearth_demand(&inst, &p, c.set));
        }
    }

    #[test]
    fn verdict_matches_allocation_oracle((inst, p) in gs_at_price()) {
        let verdict = classify_verdict(&inst, &p);
        prop_assert_eq!(verdict.is_walrasian, equilibrium::is_walrasian(&inst, &p).is_some());
    }

    #[test]
    fn lyapunov_bounds_welfare((inst, p) in gs_at_price()) {
        let welfare = equilibrium::max_welfare(&inst).unwrap().value as i64;
        prop_assert!(inst.lyapunov(&p) >= welfare);
    }

    #[test]
    fn auctions_reach_the_extreme_prices(inst in gs_instance(), policy in 0usize..4, seed in any::<u64>()) {
        let kind = [PolicyKind::Minimizer, PolicyKind::LexFirst, PolicyKind::Random(seed), PolicyKind::Largest][policy];
        let lo = equilibrium::min_walrasian(&inst).unwrap();
        let hi = equilibrium::max_walrasian(&inst).unwrap();
        for (direction, target) in [(Direction::Ascending, lo), (Direction::Descending, hi)] {
            let trace = auction::run_auction(&inst, direction, &mut Policy::new(kind), AuctionOptions::default()).unwrap();
            prop_assert_eq!(&trace.final_price, &target);
            for r in &trace.rounds {
                prop_assert!(r.lyapunov_after < r.lyapunov_before);
            }
        }
    }

    #[test]
    fn monotone_tables_keep_demand_counts_ordered(v in monotone_table(), raw in proptest::collection::vec(0u64..8, 3)) {
        let m = v.m();
        let p = PriceVector::new(raw[..m].to_vec());
        let d = demand::demand_sets(&v, &p);
        prop_assert!(d.max_utility >= 0);
        for s in ItemSet::all(m) {
            prop_assert!(d.requirement(s) <= d.redundant(s));
            prop_assert!(d.redundant(s) <= s.len());
        }
    }

    #[test]
    fn instance_json_round_trip(inst in gs_instance()) {
        let back = Instance::from_json(&inst.to_json()).unwrap();
        prop_assert_eq!(back.digest(), inst.digest());
    }

    #[test]
    fn item_set_text_round_trip(bits in 0u32..(1 << 8)) {
        let s = ItemSet::from_bits(bits);
        prop_assert_eq!(s.to_string().parse::<ItemSet>().unwrap(), s);
    }
}
