use num_complex::Complex64;
use proptest::prelude::*;

use nassgeo::codec::{index_to_rgb, rgb_to_index};
use nassgeo::oracle::{oracle_map, oracle_permutation, permutation_of_circuit};
use nassgeo::sim::{basis_image, run};
use nassgeo::verify::builtin_specs;
use nassgeo::{
    synth_two_point_swap, ClassicalImage, ColorPalette, ImageGeometry, LocalFlipSpec, NassState, Polarity,
    RotationAngle, StateVector, TransformSpec,
};

fn geometry(max_qubits: usize) -> impl Strategy<Value = ImageGeometry> {
    prop::collection::vec(1usize..=4, 1..=5)
        .prop_filter("width budget", move |w| w.iter().sum::<usize>() <= max_qubits)
        .prop_map(|w| ImageGeometry::new(w).unwrap())
}

fn coords(g: &ImageGeometry) -> impl Strategy<Value = Vec<usize>> {
    (1..=g.axis_count()).map(|j| 0..g.axis_size(j).unwrap()).collect::<Vec<_>>()
}

/// Any valid spec on `g`, swaps included.
fn spec_on(g: ImageGeometry) -> impl Strategy<Value = (ImageGeometry, TransformSpec)> {
    let mut options = builtin_specs(&g);
    options.pop();
    let structured = prop::sample::select(options);
    let swap = (coords(&g), coords(&g))
        .prop_filter("distinct points", |(s, t)| s != t)
        .prop_map(|(s, t)| TransformSpec::Swap { s, t });
    let spec = if g.len() > 1 { prop_oneof![structured, swap].boxed() } else { structured.boxed() };
    spec.prop_map(move |s| (g.clone(), s))
}

fn geometry_and_spec(max_qubits: usize) -> impl Strategy<Value = (ImageGeometry, TransformSpec)> {
    geometry(max_qubits).prop_flat_map(spec_on)
}

fn amplitudes(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(r, i)| Complex64::new(r, i)), 1 << n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn circuits_match_the_oracle((g, spec) in geometry_and_spec(9)) {
        let got = permutation_of_circuit(&spec.build(&g).unwrap(), 12).unwrap();
        prop_assert_eq!(got, oracle_permutation(&g, &spec).unwrap());
    }

    #[test]
    fn spec_text_round_trips((_g, spec) in geometry_and_spec(10)) {
        let text = spec.to_string();
        prop_assert_eq!(text.parse::<TransformSpec>().unwrap(), spec);
    }

    #[test]
    fn coordinates_round_trip(g in geometry(16), seed in any::<u64>()) {
        let i = (seed as usize) % g.len();
        prop_assert_eq!(g.index_of(&g.coordinates_of(i).unwrap()).unwrap(), i);
    }

    #[test]
    fn permutation_circuits_preserve_norm_and_linearity(
        (g, spec, a, b) in geometry_and_spec(7).prop_flat_map(|(g, spec)| {
            let n = g.qubits();
            (Just(g), Just(spec), amplitudes(n), amplitudes(n))
        }),
        alpha in -2.0f64..2.0,
        beta in -2.0f64..2.0,
    ) {
        let c = spec.build(&g).unwrap();
        let sa = StateVector::from_amplitudes(a.clone()).unwrap();
        let sb = StateVector::from_amplitudes(b.clone()).unwrap();
        let mix: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x * alpha + y * beta).collect();
        let mut ra = sa.clone();
        let mut rb = sb.clone();
        let mut rmix = StateVector::from_amplitudes(mix).unwrap();
        run(&c, &mut ra).unwrap();
        run(&c, &mut rb).unwrap();
        run(&c, &mut rmix).unwrap();
        prop_assert!((ra.norm_sqr() - sa.norm_sqr()).abs() < 1e-12);
        let mut moved: Vec<(f64, f64)> = ra.amplitudes().iter().map(|z| (z.re, z.im)).collect();
        let mut orig: Vec<(f64, f64)> = sa.amplitudes().iter().map(|z| (z.re, z.im)).collect();
        moved.sort_by(|a, b| a.partial_cmp(b).unwrap());
        orig.sort_by(|a, b| a.partial_cmp(b).unwrap());
        prop_assert_eq!(moved, orig);
        for ((m, x), y) in rmix.amplitudes().iter().zip(ra.amplitudes()).zip(rb.amplitudes()) {
            prop_assert!((m - (x * alpha + y * beta)).norm() < 1e-12);
        }
    }

    #[test]
    fn two_point_swap_moves_exactly_two_states(n in 1usize..=16, s in any::<u64>(), t in any::<u64>(), probes in prop::collection::vec(any::<u64>(), 32)) {
        let mask = (1u64 << n) - 1;
        let (s, t) = ((s & mask) as usize, (t & mask) as usize);
        prop_assume!(s != t);
        let c = synth_two_point_swap(s, t, n).unwrap();
        prop_assert_eq!(c.len(), 2 * (s ^ t).count_ones() as usize - 1);
        prop_assert_eq!(basis_image(&c, s).unwrap(), t);
        prop_assert_eq!(basis_image(&c, t).unwrap(), s);
        for p in probes {
            let p = (p & mask) as usize;
            if p != s && p != t {
                prop_assert_eq!(basis_image(&c, p).unwrap(), p);
            }
        }
    }

    #[test]
    fn encoding_commutes_with_transforms(
        (g, spec, pixels) in geometry_and_spec(8).prop_flat_map(|(g, spec)| {
            let len = g.len();
            (Just(g), Just(spec), prop::collection::vec(2usize..=256, len))
        })
    ) {
        let palette = ColorPalette::gray256();
        let img = ClassicalImage::new(g.clone(), pixels).unwrap();
        let mut quantum = NassState::encode(&img, &palette).unwrap();
        quantum.apply(&spec.build(&g).unwrap()).unwrap();
        let perm = oracle_permutation(&g, &spec).unwrap();
        let classical = NassState::encode(&perm.apply_to_image(&img).unwrap(), &palette).unwrap();
        let relocated = perm.apply_to_state(&NassState::encode(&img, &palette).unwrap()).unwrap();
        prop_assert_eq!(quantum.amplitudes(), relocated.amplitudes());
        prop_assert_eq!(quantum.decode(&palette).unwrap(), classical.decode(&palette).unwrap());
    }

    #[test]
    fn decode_inverts_encode(g in geometry(10), seed in any::<u64>(), m in 2usize..=40) {
        let colors: Vec<[u8; 3]> = (0..m).map(|i| [i as u8, 7, 7]).collect();
        let palette = ColorPalette::custom(colors).unwrap();
        let pixels: Vec<usize> = (0..g.len()).map(|i| 1 + (seed as usize).wrapping_mul(i + 1).wrapping_add(i * i) % m).collect();
        prop_assume!(pixels.iter().any(|&p| p > 1));
        let img = ClassicalImage::new(g, pixels).unwrap();
        let s = NassState::encode(&img, &palette).unwrap();
        prop_assert!((s.state().norm() - 1.0).abs() <= 1e-12);
        prop_assert_eq!(s.decode(&palette).unwrap(), img);
    }

    #[test]
    fn rgb_rule_inverts(x in 0u32..=255, y in 0u32..=255, z in 0u32..=255) {
        let i = rgb_to_index(x, y, z).unwrap();
        prop_assert!((1..=1 << 24).contains(&i));
        prop_assert_eq!(index_to_rgb(i).unwrap(), [x as u8, y as u8, z as u8]);
    }

    #[test]
    fn local_flips_and_half_turns_are_involutions(g in geometry(10), seed in any::<u64>()) {
        let k = g.axis_count();
        prop_assume!(k >= 2);
        let x = 1 + (seed as usize) % k;
        let j = 1 + (x + (seed as usize >> 8) % (k - 1)) % k;
        let bit = 1 + (seed as usize >> 16) % g.width(j).unwrap();
        let lf = TransformSpec::LocalFlip(LocalFlipSpec { preserved: x, control_axis: j, bit, polarity: Polarity::from_bit(seed >> 40 & 1 == 1) });
        let p = permutation_of_circuit(&lf.build(&g).unwrap(), 12).unwrap();
        prop_assert!(p.then(&p).unwrap().is_identity());
        if g.width(x) == g.width(j) {
            let h = TransformSpec::Rotation { x, y: j, angle: RotationAngle::Half };
            let q = permutation_of_circuit(&h.build(&g).unwrap(), 12).unwrap();
            prop_assert!(q.then(&q).unwrap().is_identity());
        }
    }

    #[test]
    fn oracle_maps_are_bijections((g, spec) in geometry_and_spec(12)) {
        let mut hit = vec![false; g.len()];
        for i in 0..g.len() {
            let j = oracle_map(&g, &spec, i).unwrap();
            prop_assert!(!hit[j]);
            hit[j] = true;
        }
    }
}
