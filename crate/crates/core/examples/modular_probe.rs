use dsqft_core::geometry::Interval;
use dsqft_core::modloc::{complex_structure, subspace_for_interval};
use dsqft_core::oneparticle::SpectralWeights;
use dsqft_core::specfun::make_params;

fn main() {
    let params = make_params(1.0, 1.0).unwrap();
    for k in [16usize, 32, 64, 128] {
        let w = SpectralWeights::new(params, k).unwrap();
        for (name, arc) in [
            ("quarter", Interval::new(-0.8, 0.8).unwrap()),
            ("wedge", Interval::half_circle_plus()),
        ] {
            let sub = subspace_for_interval(&w, &arc).unwrap();
            let s = &sub.space;
            let jc = complex_structure(k);
            let overlap = s.basis.transpose() * (&jc * &s.basis);
            let svd = overlap.svd(false, false);
            let mut exact_ones = 0; let mut near = 0;
            let mut gap_min = f64::MAX;
            for &sv in svd.singular_values.iter() {
                if sv >= 1.0 { exact_ones += 1; }
                if sv >= 1.0 - 1e-12 { near += 1; }
                gap_min = gap_min.min(1.0 - sv);
            }
            println!("K={k} {name}: dim={} strict(>=1.0)={exact_ones} loose(1e-12)={near} min(1-cos)={gap_min:.3e}", s.dim());
        }
    }
}
