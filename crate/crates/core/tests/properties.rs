use proptest::prelude::*;

use oam_antijam::backscatter::{correct_detection_prob, decide_bit, energy_threshold, EnergyThreshold};
use oam_antijam::metrics::{allocate_power, spectral_efficiency, Branch, ModeSnr};
use oam_antijam::report::format_sig9;
use oam_antijam::scenario::resolve_seed;
use oam_antijam::sensing::ModePartition;
use oam_antijam::transceiver::{decompose_modes, multiplex_modes, Domain, Normalization, SampleBlock};
use oam_antijam::{Complex64, ModeRange};

fn mode_block(n: usize, parts: &[(f64, f64)]) -> SampleBlock {
    let rows = (0..n).map(|i| vec![Complex64::new(parts[i].0, parts[i].1)]).collect();
    SampleBlock::from_rows(rows, 1e-6, Domain::Mode).unwrap()
}

proptest! {
    #[test]
    fn multiplex_then_decompose_is_identity(
        n in 1usize..40,
        parts in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 40),
    ) {
        let s = mode_block(n, &parts);
        let x = multiplex_modes(&s, n).unwrap();
        let back = decompose_modes(&x, Normalization::Unitary).unwrap();
        let e = s.total_energy().max(1e-300);
        prop_assert!((x.total_energy() / e - 1.0).abs() < 1e-12 || e < 1e-200);
        for i in 0..n {
            prop_assert!((back.row(i)[0] - s.row(i)[0]).norm() <= 1e-12 * (1.0 + e.sqrt()));
        }
    }

    #[test]
    fn unnormalized_is_scaled_unitary(
        n in 1usize..24,
        parts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 24),
    ) {
        let x = multiplex_modes(&mode_block(n, &parts), n).unwrap();
        let u = decompose_modes(&x, Normalization::Unitary).unwrap();
        let r = decompose_modes(&x, Normalization::Unnormalized).unwrap();
        let root = (n as f64).sqrt();
        for i in 0..n {
            prop_assert!((r.row(i)[0] - u.row(i)[0] * root).norm() < 1e-12);
        }
    }

    #[test]
    fn partition_covers_range(
        n in 1usize..40,
        energies in prop::collection::vec(0.0f64..2.0, 40),
        threshold in 0.0f64..2.0,
    ) {
        let range = ModeRange::for_elements(n);
        let e = energies[..n].to_vec();
        let p = ModePartition::from_energies(range, e.clone(), threshold).unwrap();
        prop_assert_eq!(p.jammed().len() + p.unjammed().len(), n);
        for l in range.iter() {
            let jammed = e[(l - range.lo()) as usize] >= threshold;
            prop_assert_eq!(p.is_jammed(l), jammed);
            prop_assert_eq!(p.jammed().contains(&l), jammed);
            prop_assert_eq!(p.unjammed().contains(&l), !jammed);
        }
        let power = allocate_power(1.0, &p).unwrap();
        let total: f64 = power.iter().sum();
        if p.unjammed().is_empty() {
            prop_assert_eq!(total, 0.0);
        } else {
            prop_assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn threshold_between_means_and_scale_free(
        q0 in 1e-3f64..10.0,
        ratio in 1.01f64..50.0,
        k in 1u32..64,
        scale in 1e-6f64..1e6,
        q in 0.0f64..1000.0,
    ) {
        let q1 = q0 * ratio;
        let th = energy_threshold(q0, q1, 0.5, 0.5, k).unwrap();
        prop_assert!(th > q0 && th < q1);
        let scaled = energy_threshold(q0 * scale, q1 * scale, 0.5, 0.5, k).unwrap();
        prop_assert!((scaled / (th * scale) - 1.0).abs() < 1e-9);
        // Decisions depend only on energy relative to the threshold.
        let a = EnergyThreshold { q_th: th, q0_hat: q0, q1_hat: q1 };
        let b = EnergyThreshold { q_th: th * scale, q0_hat: q0 * scale, q1_hat: q1 * scale };
        let x = q0 * q / 100.0;
        if ((x - th) / th).abs() > 1e-9 {
            prop_assert_eq!(decide_bit(x, &a), decide_bit(x * scale, &b));
        }
    }

    #[test]
    fn correct_detection_is_a_probability(q_th in 0.0f64..100.0, k in 1u32..64, var in 1e-6f64..100.0) {
        let p0 = correct_detection_prob(q_th, k, var, 0).unwrap();
        let p1 = correct_detection_prob(q_th, k, var, 1).unwrap();
        prop_assert!((0.0..=1.0).contains(&p0) && (0.0..=1.0).contains(&p1));
        prop_assert!((p0 + p1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn efficiency_grows_with_snr(snrs in prop::collection::vec(0.0f64..1e6, 1..20), bump in 0.0f64..10.0, at in 0usize..20) {
        let modes: Vec<ModeSnr> = snrs
            .iter()
            .enumerate()
            .map(|(i, &s)| ModeSnr { mode: i as i64, snr_linear: s, branch: Branch::Unjammed })
            .collect();
        let base = spectral_efficiency(&modes).unwrap();
        let mut more = modes.clone();
        more[at % modes.len()].snr_linear += bump;
        prop_assert!(spectral_efficiency(&more).unwrap() >= base);
        prop_assert!(base >= 0.0);
    }

    #[test]
    fn sig9_round_trips(x in prop::num::f64::NORMAL) {
        let back: f64 = format_sig9(x).parse().unwrap();
        prop_assert!((back - x).abs() <= 1e-8 * x.abs());
    }

    #[test]
    fn seed_precedence(cli in proptest::option::of(any::<u64>()), file in proptest::option::of(any::<u64>()), env in proptest::option::of(any::<u64>())) {
        let env_text = env.map(|e| e.to_string());
        let got = resolve_seed(cli, file, env_text.as_deref()).unwrap();
        prop_assert_eq!(got, cli.or(file).or(env).unwrap_or(0));
    }
}
