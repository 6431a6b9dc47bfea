use fblab_core::*;
use std::time::Instant;

fn beta(t: f64) -> f64 {
    if t <= 0.0 { 0.0 } else if t >= 1.0 { 1.0 } else { t*t*t*(10.0 - 15.0*t + 6.0*t*t) }
}

fn main() {
    let c = radial_coefficient();
    let exact = |p: [f64;2]| {
        let r = (p[0]*p[0]+p[1]*p[1]).sqrt();
        c * r.powf(4.0/3.0)
    };
    for (h, max_sweeps) in [(1.0/64.0, 40_000usize), (1.0/128.0, 160_000usize)] {
        let g = Grid::unit_square(h).unwrap();
        let trace = ScalarField::sample(&g, FieldKind::Source, exact).unwrap();
        // raw source 1
        let one = ScalarField::constant(&g, FieldKind::Source, 1.0);
        let params = InfinitySolveParams { max_sweeps, residual_tol: 1e-3, ..Default::default() };
        let t0 = Instant::now();
        let out = solve_infinity_poisson(&one, &trace, &params, None).unwrap();
        let dt = t0.elapsed().as_secs_f64();
        // sup distance away from r<0.1
        let ex = ScalarField::sample(&g, FieldKind::Solution, exact).unwrap();
        let mut sup = 0.0f64;
        let mut origin_val = 0.0;
        for i in g.indices() {
            let p = g.coord(i);
            let r = (p[0]*p[0]+p[1]*p[1]).sqrt();
            if r < 1e-12 { origin_val = out.field.at(i); }
            if r >= 0.1 { sup = sup.max((out.field.at(i)-ex.at(i)).abs()); }
        }
        println!("RAW h=1/{:.0} sweeps={} conv={} resid={:.3e} time={:.1}s sup(r>=0.1)={:.4e} u(0)={:.4e}",
            1.0/h, out.iterations, out.converged, out.residual_sup, dt, sup, origin_val);

        // penalized source at eps=1e-3 with exact v
        let eps = 1e-3;
        let src = ScalarField::sample(&g, FieldKind::Source, |p| {
            let v = 0.25*(p[0]*p[0]+p[1]*p[1]);
            beta(v/eps)
        }).unwrap();
        let t0 = Instant::now();
        let out = solve_infinity_poisson(&src, &trace, &params, None).unwrap();
        let dt = t0.elapsed().as_secs_f64();
        let mut sup = 0.0f64;
        for i in g.indices() {
            let p = g.coord(i);
            let r = (p[0]*p[0]+p[1]*p[1]).sqrt();
            if r >= 0.1 { sup = sup.max((out.field.at(i)-ex.at(i)).abs()); }
        }
        println!("PEN h=1/{:.0} sweeps={} conv={} resid={:.3e} time={:.1}s sup(r>=0.1)={:.4e}",
            1.0/h, out.iterations, out.converged, out.residual_sup, dt, sup);
    }
}
