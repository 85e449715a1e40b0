use proptest::prelude::*;

use radon_moments::moments::{
    baseline_raw_moments, build_power_table, drt_raw_moments, naive_multiplications,
    naive_raw_moments, ProjectionMoments,
};
use radon_moments::pgm::{decode_pgm, encode_pgm, PgmEncoding};
use radon_moments::{generate, project, GrayImage, ImageKind, MultCounter, RawMoments, Uncounted};

fn arb_image(max_side: usize) -> impl Strategy<Value = GrayImage> {
    (1..=max_side, 1..=max_side).prop_flat_map(|(w, h)| {
        prop::collection::vec(any::<u8>(), w * h)
            .prop_map(move |pixels| GrayImage::new(w, h, pixels).unwrap())
    })
}

/// Images that stress the top of the intensity range as well.
fn arb_bright_image(max_side: usize) -> impl Strategy<Value = GrayImage> {
    (1..=max_side, 1..=max_side).prop_flat_map(|(w, h)| {
        prop::collection::vec(prop_oneof![Just(255u8), Just(0u8), any::<u8>()], w * h)
            .prop_map(move |pixels| GrayImage::new(w, h, pixels).unwrap())
    })
}

/// Definition evaluated in plain i128 arithmetic, independent of every backend.
fn definition(image: &GrayImage) -> RawMoments {
    let mut v = [0i128; 10];
    for y in 0..image.height() {
        for x in 0..image.width() {
            let p = i128::from(image.get(x, y));
            for (slot, &(i, j)) in RawMoments::ORDERS.iter().enumerate() {
                v[slot] += p * (x as i128).pow(i) * (y as i128).pow(j);
            }
        }
    }
    RawMoments::from_values(v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn backends_agree_with_definition(img in arb_image(48)) {
        let expected = definition(&img);
        prop_assert_eq!(naive_raw_moments(&img, &mut Uncounted), expected);
        prop_assert_eq!(baseline_raw_moments(&img, &mut Uncounted), expected);
        prop_assert_eq!(drt_raw_moments(&img, &mut Uncounted), expected);
    }

    #[test]
    fn bright_images_agree(img in arb_bright_image(64)) {
        let expected = naive_raw_moments(&img, &mut Uncounted);
        prop_assert_eq!(drt_raw_moments(&img, &mut Uncounted), expected);
    }

    #[test]
    fn projections_conserve_mass(img in arb_image(40)) {
        let p = project(&img);
        let mass = img.total_mass();
        prop_assert_eq!(p.masses(), [mass; 4]);
        let (w, h) = (img.width(), img.height());
        prop_assert_eq!(p.vertical.len(), w);
        prop_assert_eq!(p.horizontal.len(), h);
        prop_assert_eq!(p.diagonal.len(), w + h - 1);
        prop_assert_eq!(p.anti_diagonal.len(), w + h - 1);
        let line_max = |n: usize| 255 * n as u32;
        prop_assert!(p.vertical.iter().all(|&v| v <= line_max(w.max(h))));
        prop_assert!(p.horizontal.iter().all(|&v| v <= line_max(w.max(h))));
        prop_assert!(p.diagonal.iter().all(|&v| v <= line_max(w.min(h))));
        prop_assert!(p.anti_diagonal.iter().all(|&v| v <= line_max(w.min(h))));
    }

    #[test]
    fn transpose_swaps_projection_roles(img in arb_image(32)) {
        let p = project(&img);
        let t = project(&img.transpose());
        prop_assert_eq!(&t.vertical, &p.horizontal);
        prop_assert_eq!(&t.horizontal, &p.vertical);
        prop_assert_eq!(&t.diagonal, &p.diagonal);
        // (x, y) -> (y, x) maps y - x + M - 1 to x - y + N - 1: A is reversed.
        let reversed: Vec<u32> = p.anti_diagonal.iter().rev().copied().collect();
        prop_assert_eq!(&t.anti_diagonal, &reversed);
    }

    #[test]
    fn transpose_swaps_moments(img in arb_image(32)) {
        let m = drt_raw_moments(&img, &mut Uncounted);
        let t = drt_raw_moments(&img.transpose(), &mut Uncounted);
        prop_assert_eq!(t.m00, m.m00);
        prop_assert_eq!(t.m11, m.m11);
        prop_assert_eq!((t.m10, t.m01), (m.m01, m.m10));
        prop_assert_eq!((t.m20, t.m02), (m.m02, m.m20));
        prop_assert_eq!((t.m30, t.m03), (m.m03, m.m30));
        prop_assert_eq!((t.m21, t.m12), (m.m12, m.m21));
    }

    #[test]
    fn delta_projection_and_moments(w in 1usize..30, h in 1usize..30, fx in 0.0f64..1.0, fy in 0.0f64..1.0, v in 1u8..=255) {
        let x = ((w as f64) * fx) as usize;
        let y = ((h as f64) * fy) as usize;
        let img = generate(ImageKind::Delta { x, y, v }, w, h, 0).unwrap();
        let p = project(&img);
        let v32 = u32::from(v);
        let only = |arr: &[u32], k: usize| arr.iter().enumerate().all(|(i, &a)| a == if i == k { v32 } else { 0 });
        prop_assert!(only(&p.vertical, x));
        prop_assert!(only(&p.horizontal, y));
        prop_assert!(only(&p.diagonal, x + y));
        prop_assert!(only(&p.anti_diagonal, y + w - 1 - x));
        let m = drt_raw_moments(&img, &mut Uncounted);
        for (&(i, j), value) in RawMoments::ORDERS.iter().zip(m.values()) {
            prop_assert_eq!(value, i128::from(v) * (x as i128).pow(i) * (y as i128).pow(j));
        }
    }

    #[test]
    fn moment_bounds(img in arb_image(24)) {
        let m = drt_raw_moments(&img, &mut Uncounted);
        let (w, h) = (img.width() as i128, img.height() as i128);
        prop_assert!(m.m00 >= 0 && m.m00 <= 255 * w * h);
        for (&(i, j), value) in RawMoments::ORDERS.iter().zip(m.values()) {
            prop_assert!(value >= 0);
            prop_assert!(value <= (w - 1).pow(i) * (h - 1).pow(j) * m.m00);
        }
    }

    #[test]
    fn counts_are_structural(img in arb_image(40)) {
        let (w, h) = (img.width() as u64, img.height() as u64);
        let mut c = MultCounter::new();
        drt_raw_moments(&img, &mut c);
        prop_assert_eq!(c.count, 3 * w + 3 * h + 3 * (w + h - 1));
        prop_assert!(c.assembly_count <= 8);
        prop_assert!(c.count <= 6 * (w + h));

        c.reset();
        baseline_raw_moments(&img, &mut c);
        prop_assert!(c.count <= 3 * w * h + 7 * h);

        c.reset();
        naive_raw_moments(&img, &mut c);
        prop_assert_eq!(c.count, naive_multiplications(img.width(), img.height()));
    }

    #[test]
    fn projection_moments_match_their_definitions(img in arb_image(24)) {
        let p = project(&img);
        let table = build_power_table(img.width() + img.height());
        let pm = ProjectionMoments::from_projections(&p, &table, &mut Uncounted).unwrap();
        let mut d2 = 0i128;
        let mut d3 = 0i128;
        let mut a3 = 0i128;
        for y in 0..img.height() {
            for x in 0..img.width() {
                let px = i128::from(img.get(x, y));
                let (x, y) = (x as i128, y as i128);
                d2 += px * (x + y).pow(2);
                d3 += px * (x + y).pow(3);
                a3 += px * (y - x).pow(3);
            }
        }
        prop_assert_eq!((pm.d2, pm.d3, pm.a3), (d2, d3, a3));
    }

    #[test]
    fn pgm_round_trip(img in arb_image(40)) {
        for enc in [PgmEncoding::Ascii, PgmEncoding::Binary] {
            prop_assert_eq!(decode_pgm(&encode_pgm(&img, enc)).unwrap(), img.clone());
        }
    }
}

#[test]
fn edge_shapes() {
    for (w, h) in [
        (1, 1),
        (1, 64),
        (64, 1),
        (63, 1),
        (1, 300),
        (300, 1),
        (2, 1),
        (1, 2),
    ] {
        let img = generate(ImageKind::UniformRandom, w, h, (w * 1000 + h) as u64).unwrap();
        assert_eq!(
            drt_raw_moments(&img, &mut Uncounted),
            definition(&img),
            "{w}x{h}"
        );
    }
}

#[test]
fn saturated_large_image_is_exact() {
    // All-255 image: closed forms for the power sums avoid relying on any backend.
    let (w, h) = (1500usize, 1100usize);
    let img = generate(ImageKind::Constant(255), w, h, 0).unwrap();
    let s = |n: usize, e: u32| (0..n as i128).map(|k| k.pow(e)).sum::<i128>();
    let expected =
        RawMoments::from_values(RawMoments::ORDERS.map(|(i, j)| 255 * s(w, i) * s(h, j)));
    assert_eq!(drt_raw_moments(&img, &mut Uncounted), expected);
    assert_eq!(baseline_raw_moments(&img, &mut Uncounted), expected);
    assert_eq!(naive_raw_moments(&img, &mut Uncounted), expected);
}
