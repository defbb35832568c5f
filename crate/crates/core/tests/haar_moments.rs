use pentaks_core::sampling::{haar_state, stream_rng};
use pentaks_core::StateVector;

#[test]
fn overlap_with_fixed_state_has_mean_one_over_dim() {
    for dim in [3usize, 4] {
        let fixed = StateVector::basis(dim, 1).unwrap();
        let n = 100_000;
        let mut rng = stream_rng(11, dim as u64);
        let xs: Vec<f64> = (0..n).map(|_| haar_state(dim, &mut rng).unwrap().overlap_sq(&fixed)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        assert!((mean - 1.0 / dim as f64).abs() < 4.0 * se, "dim {dim}: mean {mean}, se {se}");
        // Second moment of a Haar overlap is 2 / (d (d + 1)).
        let m2 = xs.iter().map(|x| x * x).sum::<f64>() / n as f64;
        assert!((m2 - 2.0 / (dim * (dim + 1)) as f64).abs() < 0.01);
    }
}
