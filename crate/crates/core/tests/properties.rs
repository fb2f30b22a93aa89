//! Property-based invariants over the core numeric kernels.

use proptest::prelude::*;
use sarwake_core::metrics::{empirical_std, psnr};
use sarwake_core::pgm::{read_pgm, write_pgm};
use sarwake_core::radon::wake_arm_angle;
use sarwake_core::shrinkage::{soft_threshold, sure_cost};
use sarwake_core::wavelet::{dwt2, idwt2, wavelet_filters};
use sarwake_core::Image;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pgm_round_trip_preserves_integer_images(
        w in 1usize..32,
        h in 1usize..32,
        seed in any::<u64>(),
    ) {
        let mut state = seed;
        let pixels: Vec<f64> = (0..w * h)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
                ((state >> 33) % 256) as f64
            })
            .collect();
        let img = Image::new(w, h, pixels).unwrap();
        let bytes = write_pgm(&img);
        let back = read_pgm(&bytes).unwrap();
        prop_assert_eq!(img, back);
    }

    #[test]
    fn dwt_round_trip_and_parseval(
        wavelet in prop::sample::select(vec!["haar", "sym8", "db8"]),
        levels in 1usize..4,
        seed in any::<u64>(),
    ) {
        let side = 32usize;
        let mut state = seed | 1;
        let pixels: Vec<f64> = (0..side * side)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
                ((state >> 33) % 512) as f64 / 2.0
            })
            .collect();
        let img = Image::new(side, side, pixels).unwrap();
        let filters = wavelet_filters(wavelet).unwrap();
        let pyramid = dwt2(&img, &filters, levels).unwrap();

        let energy_in: f64 = img.pixels().iter().map(|p| p * p).sum();
        prop_assert!((pyramid.energy() - energy_in).abs() < 1e-6 * energy_in.max(1.0));

        let back = idwt2(&pyramid, &filters).unwrap();
        let max_err = img
            .pixels()
            .iter()
            .zip(back.pixels())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        prop_assert!(max_err < 1e-8, "max reconstruction error {max_err}");
    }

    #[test]
    fn soft_threshold_is_non_expansive(x in -1e3f64..1e3, t in 0.0f64..1e3) {
        let y = soft_threshold(x, t).unwrap();
        prop_assert!(y.abs() <= x.abs() + 1e-12);
        prop_assert!((x - y).abs() <= t + 1e-12);
        prop_assert!(x == 0.0 || y == 0.0 || y.signum() == x.signum());
    }

    #[test]
    fn sure_cost_zero_threshold_and_large_tail(
        xs in prop::collection::vec(-10.0f64..10.0, 1..64),
    ) {
        // t = 0 keeps everything: risk is d minus twice the zero count.
        let d = xs.len() as f64;
        let zeros = xs.iter().filter(|x| **x == 0.0).count() as f64;
        let at_zero = sure_cost(&xs, 0.0).unwrap();
        prop_assert!((at_zero - (d - 2.0 * zeros)).abs() < 1e-9);

        // Beyond max |x| the risk is flat: everything is killed.
        let top = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let killed: f64 = xs.iter().map(|x| x * x).sum::<f64>() - d;
        prop_assert!((sure_cost(&xs, top + 1.0).unwrap() - killed).abs() < 1e-9);
        prop_assert!((sure_cost(&xs, top + 5.0).unwrap() - killed).abs() < 1e-9);
    }

    #[test]
    fn std_is_shift_invariant_and_scale_equivariant(
        xs in prop::collection::vec(-100.0f64..100.0, 2..64),
        shift in -50.0f64..50.0,
        scale in 0.1f64..10.0,
    ) {
        let n = xs.len();
        let base = empirical_std(&Image::new(n, 1, xs.clone()).unwrap());
        let shifted = Image::new(n, 1, xs.iter().map(|x| x + shift).collect()).unwrap();
        let scaled = Image::new(n, 1, xs.iter().map(|x| x * scale).collect()).unwrap();
        prop_assert!((empirical_std(&shifted) - base).abs() < 1e-8);
        prop_assert!((empirical_std(&scaled) - scale * base).abs() < 1e-6);
    }

    #[test]
    fn psnr_is_symmetric(
        a in prop::collection::vec(0.0f64..255.0, 16),
        b in prop::collection::vec(0.0f64..255.0, 16),
    ) {
        let ia = Image::new(4, 4, a).unwrap();
        let ib = Image::new(4, 4, b).unwrap();
        let ab = psnr(&ia, &ib).unwrap();
        let ba = psnr(&ib, &ia).unwrap();
        prop_assert!((ab - ba).abs() < 1e-9 || (ab.is_infinite() && ba.is_infinite()));
    }

    #[test]
    fn arm_angle_stays_in_range(theta in 0.0f64..180.0) {
        let arm = wake_arm_angle(theta).unwrap();
        prop_assert!((0.0..180.0).contains(&arm));
        // Applying the rule twice returns to the start angle.
        let back = wake_arm_angle(arm).unwrap();
        prop_assert!((back - theta).abs() < 1e-9 || (back - theta).abs() > 179.0);
    }
}
