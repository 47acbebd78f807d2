mod common;

use common::{close, rng};
use qmaml::learner::*;
use rand::Rng;

fn loss(net: &LearnerNet, phi: &[f64], upstream: &[f64]) -> f64 {
    net.forward(phi).unwrap().iter().zip(upstream).map(|(a, b)| a * b).sum()
}

#[test]
fn backward_matches_finite_differences() {
    let mut r = rng(8);
    for hidden in [Activation::LeakyRelu, Activation::Tanh, Activation::Identity] {
        for output in [OutputScaling::TanhPi, OutputScaling::Linear] {
            let net = LearnerNet::random(&[3, 7, 5, 4], hidden, output, r.random()).unwrap();
            let phi: Vec<f64> = (0..3).map(|_| r.random_range(-2.0..2.0)).collect();
            let upstream: Vec<f64> = (0..4).map(|_| r.random_range(-1.0..1.0)).collect();
            let grads = net.backward(&phi, &upstream).unwrap();
            let h = 1e-6;
            for (t, g) in grads.tensors.iter().enumerate() {
                for (k, &gk) in g.iter().enumerate() {
                    let mut plus = net.clone();
                    plus.tensors_mut()[t][k] += h;
                    let mut minus = net.clone();
                    minus.tensors_mut()[t][k] -= h;
                    let fd = (loss(&plus, &phi, &upstream) - loss(&minus, &phi, &upstream)) / (2.0 * h);
                    assert!(close(gk, fd, 1e-5, 1e-8), "{hidden}/{output} tensor {t} entry {k}: {gk} vs {fd}");
                }
            }
        }
    }
}

#[test]
fn standard_shape() {
    let net = LearnerNet::standard(3, 45, 1).unwrap();
    assert_eq!(net.sizes(), vec![3, HIDDEN_WIDTH, HIDDEN_WIDTH, 45]);
    assert_eq!(net.num_weights(), 3 * 256 + 256 + 256 * 256 + 256 + 256 * 45 + 45);
    let theta = net.forward(&[0.5, -2.0, 3.0]).unwrap();
    assert!(theta.iter().all(|t| t.abs() < std::f64::consts::PI));
}

#[test]
fn adam_fits_a_quadratic_target() {
    let mut net = LearnerNet::random(&[2, 16, 16, 3], Activation::LeakyRelu, OutputScaling::Linear, 4).unwrap();
    let phi = [0.3, -0.7];
    let target = [0.5, -1.0, 1.5];
    let objective = |net: &LearnerNet| -> f64 {
        net.forward(&phi).unwrap().iter().zip(&target).map(|(a, b)| (a - b).powi(2)).sum()
    };
    let mut adam = AdamState::for_tensors(1e-2, &net.tensors());
    let start = objective(&net);
    let mut prev = start;
    for step in 0..200 {
        let out = net.forward(&phi).unwrap();
        let upstream: Vec<f64> = out.iter().zip(&target).map(|(a, b)| 2.0 * (a - b)).collect();
        let grads = net.backward(&phi, &upstream).unwrap();
        net.apply_gradients(&mut adam, &grads).unwrap();
        let now = objective(&net);
        if step < 20 {
            assert!(now < prev, "step {step}: {now} ≥ {prev}");
        }
        prev = now;
    }
    assert!(prev < 1e-3 * start);
}

#[test]
fn checkpoint_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("net.ckpt");
    let net = LearnerNet::random(&[4, 8, 8, 6], Activation::Tanh, OutputScaling::Linear, 17).unwrap();
    save_checkpoint(&net, &path).unwrap();
    let back = load_checkpoint(&path).unwrap();
    assert_eq!(net, back);
    assert_eq!(write_checkpoint(&net), write_checkpoint(&back));
}
