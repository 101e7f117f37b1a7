use rand::Rng;
use taurho::region::{
    boundary_csv, boundary_samples, classical_contains, contains, durbin_stuart_lower,
    parse_boundary_csv, phi_boundary, phi_piece, BoundarySegment,
};
use taurho::verify::instance_rng;
use taurho::RegionPoint;

#[test]
fn junctions_are_continuous() {
    for n in 2..=50usize {
        let x = -1.0 + 2.0 / n as f64;
        let pn = -1.0 + 2.0 / (n * n) as f64;
        assert!((phi_piece(n, x) - phi_piece(n + 1, x)).abs() <= 1e-12);
        assert!((phi_piece(n, x) - pn).abs() <= 1e-12 && (phi_piece(n + 1, x) - pn).abs() <= 1e-12);
    }
}

#[test]
fn strictly_increasing() {
    let mut prev = phi_boundary(-1.0).unwrap();
    for i in 1..=10_000 {
        let cur = phi_boundary(-1.0 + 2.0 * i as f64 / 10_000.0).unwrap();
        assert!(cur > prev, "i = {i}");
        prev = cur;
    }
}

#[test]
fn concave_on_each_segment() {
    let mut rng = instance_rng(20, 0);
    for _ in 0..1000 {
        let n: usize = rng.gen_range(2..=30);
        let seg = BoundarySegment::new(n).unwrap();
        let hi = seg.tau_hi.min(1.0);
        let a = rng.gen_range(seg.tau_lo..=hi);
        let b = rng.gen_range(seg.tau_lo..=hi);
        let mid = phi_boundary(0.5 * (a + b)).unwrap();
        let chord = 0.5 * (phi_boundary(a).unwrap() + phi_boundary(b).unwrap());
        assert!(mid >= chord - 1e-12);
    }
}

fn grid(i: usize, j: usize) -> RegionPoint {
    RegionPoint::new(-1.0 + 2.0 * i as f64 / 199.0, -1.0 + 2.0 * j as f64 / 199.0).unwrap()
}

#[test]
fn point_symmetric_and_inside_classical_region() {
    let mut inside = 0;
    for i in 0..200 {
        for j in 0..200 {
            let p = grid(i, j);
            assert_eq!(contains(&p), contains(&grid(199 - i, 199 - j)));
            if contains(&p) {
                inside += 1;
                assert!(classical_contains(&p));
            }
        }
    }
    assert!(inside > 0);
}

#[test]
fn durbin_stuart_only_sharp_at_sharp_points() {
    for n in 2..=20usize {
        let x = -1.0 + 2.0 / n as f64;
        assert!((phi_boundary(x).unwrap() - durbin_stuart_lower(x)).abs() <= 1e-12);
    }
    for n in 2..=10usize {
        let seg = BoundarySegment::new(n).unwrap();
        let mid = 0.5 * (seg.tau_lo + seg.tau_hi.min(1.0));
        assert!(phi_boundary(mid).unwrap() - durbin_stuart_lower(mid) > 1e-6);
    }
}

#[test]
fn csv_file_round_trip() {
    let rows = boundary_samples(2521).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("boundary.csv");
    std::fs::write(&path, boundary_csv(&rows)).unwrap();
    let back = parse_boundary_csv(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(back, rows);
}
