use cranklab_core::congruence::{sweep_ono, PartitionOracle};
use cranklab_core::{partition_count, Verdict};

// For l in {5, 7, 11} and k = 1 every applicable argument lies in a
// Ramanujan progression, so each instance must hold.
#[test]
fn ono_k1_instances_hold_and_match_exact_counts() {
    let mut oracle = PartitionOracle::new(1_000_000);
    for l in [5i64, 7, 11] {
        for m in [5u64, 7, 11, 13, 17] {
            let report = sweep_ono(l, 1, m, 40, &mut oracle).unwrap();
            let summary = report.summary();
            assert!(summary.holds > 0, "l={l} m={m}: no applicable instance");
            assert_eq!(summary.fails, 0, "l={l} m={m}");
            for inst in report.instances() {
                if inst.verdict != Verdict::Holds {
                    continue;
                }
                let arg: usize = inst.params["argument"].parse().unwrap();
                assert!(
                    partition_count(arg).is_divisible_by(l as u64),
                    "p({arg}) mod {l}"
                );
            }
        }
    }
}

// Away from Ramanujan's primes verdicts are data; each must still agree
// with the exact count.
#[test]
fn ono_l13_verdicts_agree_with_exact_counts() {
    let mut oracle = PartitionOracle::new(1_000_000);
    let report = sweep_ono(13, 1, 5, 60, &mut oracle).unwrap();
    let mut applicable = 0;
    for inst in report.instances() {
        let Some(arg) = inst.params.get("argument") else {
            assert_eq!(inst.verdict, Verdict::NotApplicable);
            continue;
        };
        applicable += 1;
        let divisible = partition_count(arg.parse().unwrap()).is_divisible_by(13);
        let expected = if divisible {
            Verdict::Holds
        } else {
            Verdict::Fails
        };
        assert_eq!(inst.verdict, expected, "argument {arg}");
    }
    assert!(applicable > 0);
}
