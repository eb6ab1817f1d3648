use affine_hls::autocorr::autocorrelation;
use affine_hls::funcspace::TestFunction;
use affine_hls::numerics::integrate_powerweight_detailed;
use affine_hls::QuadratureSpec;

fn main() {
    let sp = QuadratureSpec { rel_tol: 1e-8, ..QuadratureSpec::default() };
    let inner = QuadratureSpec { rel_tol: 5e-10, abs_tol: 5e-14, ..sp.clone() };
    let f = TestFunction::hls_extremal(1, 0.5);
    for t in [0.5, 1.0, 100.0, 9000.0, 12000.0, 15000.0, 21000.0, 1e6, 1e8] {
        match autocorrelation(&f, &[t], &inner) {
            Ok(v) => println!("G({t:e}) = {v:.6e}"),
            Err(e) => println!("G({t:e}) ERROR {e}"),
        }
    }
    let g = |t: f64| autocorrelation(&f, &[t], &inner).unwrap_or(f64::NAN);
    match integrate_powerweight_detailed(g, 0.5, None, &sp) {
        Ok(out) => println!("outer: value {:.8e} est {:.2e} conv={} div={}", out.value, out.est_error, out.converged, out.divergent),
        Err(e) => println!("outer ERROR {e}"),
    }
}
