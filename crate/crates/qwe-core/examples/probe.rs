use qwe_core::transforms::*;
use qwe_core::vector::*;

fn main() {
    for n in [6usize, 10, 14, 20] {
        let fwd = build_transform(TransformKind::TTilde, n, Precision::Float64).unwrap();
        let bwd = build_transform(TransformKind::TTildeInv, n, Precision::Float64).unwrap();
        let mut state = 0x12345678u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as f64) / (u32::MAX as f64)
        };
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let mut a: Vec<f64> = (0..=n).map(|_| next()).collect();
            let s: f64 = a.iter().sum();
            a.iter_mut().for_each(|x| *x /= s);
            let vecv = EnumeratorVector::float(n, VectorKind::Sld, a.clone()).unwrap();
            let there = apply_transform(&fwd, &vecv).unwrap();
            let back = apply_transform(&bwd, &there).unwrap();
            for (x, y) in a.iter().zip(back.to_f64()) {
                worst = worst.max((x - y).abs());
            }
        }
        println!("n={n}: worst abs error {worst:.3e}");
    }
}
