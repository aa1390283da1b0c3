use std::f64::consts::PI;

use hk_core::arakelov::{
    h0, height_zeta_residue_check, phi_oplus, phi_oplus_symmetric, projective_identity_check, theta_decay_check, xi_integral,
    ScaledLatticeSum, ZetaPEvaluation,
};
use hk_core::constants::FieldInvariants;
use hk_core::enumerate::{count, count_direct, count_projective, count_projective_moebius, CountRequest, CountTarget};
use hk_core::geometry::anticanonical;
use hk_core::{HkVariety, LineBundleClass, Region};
use num_rational::BigRational;

use crate::report::{Check, VerifyReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    /// Theta counts: Riemann-Roch, direct sums, decay bound.
    Arakelov,
    /// Integral representations of the completed zeta function and of projective height zeta functions.
    Integral,
    /// Residue of the height zeta function of the projective line.
    Residue,
    /// Whole = open + subbundle, with the subbundle counted by reduction and directly.
    Partition,
    /// Lattice counts of projective space against the Moebius formula.
    Oracle,
}

type Failure = Box<dyn std::error::Error>;

fn b(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn arakelov() -> Vec<Check> {
    let rr = (-500..=500).map(|i| i as f64 / 100.0).map(|x| (h0(x) - h0(-x) - x).abs()).fold(0.0, f64::max);
    let sums = [vec![1.0], vec![1.0, 1.0], vec![0.5, 1.0, 3.0], vec![0.3, 0.7, 1.1, 2.0, 4.0]];
    let mut oplus: f64 = 0.0;
    for s in sums {
        let s = ScaledLatticeSum::new(s).unwrap();
        for i in -20..=30 {
            let x = i as f64 / 10.0;
            let a = phi_oplus(&s, x);
            oplus = oplus.max((a - phi_oplus_symmetric(&s, x)).abs() / a.max(1.0));
        }
    }
    let grid: Vec<f64> = (0..=50).map(|i| -(i as f64) / 10.0).collect();
    let decay = theta_decay_check(&grid).unwrap();
    vec![
        Check::error("Riemann-Roch h0(x) - h0(-x) = x on [-5, 5]", rr, 1e-12),
        Check::error("direct sum: product form = symmetric form, relative", oplus, 1e-12),
        Check {
            name: "decay constant bounds phi exp(pi e^{-2x})".into(),
            observed: decay.observed_beta,
            tolerance: hk_core::arakelov::decay_constant(),
            pass: decay.bounded,
        },
    ]
}

fn integral() -> Result<Vec<Check>, Failure> {
    let inv = FieldInvariants::rationals();
    let mut checks = Vec::new();
    for s in [2.0, 3.0, 5.0] {
        let v = xi_integral(s, 1e-12)?;
        checks.push(Check::error(format!("xi integral at s={s}"), (v.value - 2.0 * inv.xi(s)?).abs(), 1e-8));
    }
    let p = projective_identity_check(1, 4.0, 1e-12, ZetaPEvaluation::Certified { tol: 1e-6 })?;
    checks.push(Check::error("projective identity n=1 s=4, certified direct sum", p.diff, 1e-6));
    let p = projective_identity_check(1, 6.0, 1e-12, ZetaPEvaluation::Analytic)?;
    checks.push(Check::error("projective identity n=1 s=6, closed form", p.diff, 1e-6));
    let p = projective_identity_check(2, 4.0, 1e-12, ZetaPEvaluation::Truncated { h_max: 200.0 })?;
    checks.push(Check::error("projective identity n=2 s=4, truncated sum", p.diff, 1e-5));
    Ok(checks)
}

fn residue() -> Vec<Check> {
    let r = height_zeta_residue_check();
    let decreasing = r.samples.windows(2).all(|w| w[0] > w[1]);
    vec![
        Check::error("extrapolated residue vs 6/pi", (r.extrapolated - 6.0 / PI).abs(), 1e-3),
        Check {
            name: "samples decrease toward the limit".into(),
            observed: r.samples[r.samples.len() - 1],
            tolerance: r.samples[0],
            pass: decreasing,
        },
    ]
}

fn partition(threads: usize) -> Result<Vec<Check>, Failure> {
    let x = HkVariety::new(2, vec![0, 1])?;
    let k = anticanonical(&x);
    let mut checks = Vec::new();
    let (mut whole_ok, mut direct_ok) = (true, true);
    let (mut worst_sum, mut worst_direct) = (0u128, 0u128);
    for bound in 1..=30 {
        let get = |region| {
            count(&CountRequest { target: CountTarget::Hk { variety: x.clone(), bundle: k }, bound: b(bound), region, threads })
                .map(|r| r.count)
        };
        let (w, u, f) = (get(Region::Whole)?, get(Region::GoodOpen)?, get(Region::SubbundleF)?);
        let d = count_direct(&x, k, &b(bound), Region::SubbundleF)?;
        whole_ok &= w == u + f;
        direct_ok &= d == f;
        worst_sum = worst_sum.max(w.abs_diff(u + f));
        worst_direct = worst_direct.max(d.abs_diff(f));
    }
    checks.push(Check {
        name: "X = U + F on 2,2:0,1 with -K, B = 1..30".into(),
        observed: worst_sum as f64,
        tolerance: 0.0,
        pass: whole_ok,
    });
    checks.push(Check {
        name: "F by reduction = F enumerated directly".into(),
        observed: worst_direct as f64,
        tolerance: 0.0,
        pass: direct_ok,
    });
    let s = HkVariety::new(2, vec![1])?;
    let l = LineBundleClass::new(2, 5);
    let get = |region| {
        count(&CountRequest { target: CountTarget::Hk { variety: s.clone(), bundle: l }, bound: b(500), region, threads }).map(|r| r.count)
    };
    let (w, u, f) = (get(Region::Whole)?, get(Region::GoodOpen)?, get(Region::SubbundleF)?);
    checks.push(Check::exact("X = U + F on 1,2:1 with 2,5 at B = 500", w, u + f));
    Ok(checks)
}

fn oracle() -> Result<Vec<Check>, Failure> {
    let mut checks = Vec::new();
    for n in 1..=3 {
        let mut worst = 0u128;
        for bound in 1..=50 {
            worst = worst.max(count_projective(n, 1, &b(bound))?.abs_diff(count_projective_moebius(n, &b(bound))));
        }
        checks.push(Check {
            name: format!("P^{n}: lattice count = Moebius count, B = 1..50"),
            observed: worst as f64,
            tolerance: 0.0,
            pass: worst == 0,
        });
    }
    Ok(checks)
}

pub fn run(suite: Suite, threads: usize) -> Result<VerifyReport, Failure> {
    let (name, checks) = match suite {
        Suite::Arakelov => ("arakelov", arakelov()),
        Suite::Integral => ("integral", integral()?),
        Suite::Residue => ("residue", residue()),
        Suite::Partition => ("partition", partition(threads)?),
        Suite::Oracle => ("oracle", oracle()?),
    };
    Ok(VerifyReport::new(name, checks))
}
