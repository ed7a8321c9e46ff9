use cyclophi::census::{Point, PointSet};
use cyclophi::exec::Executor;
use cyclophi::symmetry::{hausdorff, hausdorff_grid, scale_to_unit, trimmed_hausdorff, UnitCloud};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const SCALE: u64 = 1_000_000;

fn random_cloud(rng: &mut StdRng, len: usize) -> UnitCloud {
    let pts: PointSet = (0..len)
        .map(|_| Point::new(rng.gen_range(0..=SCALE as i64), rng.gen_range(0..=SCALE)))
        .collect();
    scale_to_unit(&pts, SCALE, SCALE).unwrap()
}

/// Points bunched near a few centres, the shape real coefficient clouds have.
fn clustered_cloud(rng: &mut StdRng, len: usize) -> UnitCloud {
    let centres: Vec<(i64, u64)> = (0..4)
        .map(|_| (rng.gen_range(0..=SCALE as i64), rng.gen_range(0..=SCALE)))
        .collect();
    let pts: PointSet = (0..len)
        .map(|i| {
            let (cx, cy) = centres[i % centres.len()];
            let c = (cx + rng.gen_range(-2000..=2000)).clamp(0, SCALE as i64);
            let n = (cy as i64 + rng.gen_range(-2000..=2000)).clamp(0, SCALE as i64) as u64;
            Point::new(c, n)
        })
        .collect();
    scale_to_unit(&pts, SCALE, SCALE).unwrap()
}

#[test]
fn grid_equals_brute_force() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let exec = Executor::default();
    for case in 0..100 {
        let (la, lb) = if case < 3 {
            (10_000, 10_000)
        } else {
            (rng.gen_range(1..=2500), rng.gen_range(1..=2500))
        };
        let (a, b) = if case % 2 == 0 {
            (random_cloud(&mut rng, la), random_cloud(&mut rng, lb))
        } else {
            (clustered_cloud(&mut rng, la), clustered_cloud(&mut rng, lb))
        };
        let brute = hausdorff(&a, &b).unwrap();
        let grid = hausdorff_grid(&a, &b, &exec).unwrap();
        assert!(
            (brute - grid).abs() <= 1e-12 * brute.max(1.0),
            "case {case}: {brute} vs {grid}"
        );
    }
}

#[test]
fn metric_axioms() {
    let mut rng = StdRng::seed_from_u64(7);
    let exec = Executor::sequential();
    for _ in 0..30 {
        let len = rng.gen_range(1..200);
        let a = random_cloud(&mut rng, len);
        let len = rng.gen_range(1..200);
        let b = random_cloud(&mut rng, len);
        let len = rng.gen_range(1..200);
        let c = random_cloud(&mut rng, len);
        let ab = hausdorff(&a, &b).unwrap();
        assert_eq!(ab, hausdorff(&b, &a).unwrap());
        assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
        let (bc, ac) = (hausdorff(&b, &c).unwrap(), hausdorff(&a, &c).unwrap());
        assert!(ac <= ab + bc + 1e-12);
        assert!((0.0..=2f64.sqrt()).contains(&ab));
        let (full, trimmed) = trimmed_hausdorff(&a, &b, 0.2, &exec).unwrap();
        assert_eq!(full, ab);
        assert!(trimmed <= full);
    }
}
