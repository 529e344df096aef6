//! The three subcommands: the invariant suite, the spectrum dump and the
//! chirality certificates.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;

use dklattice::calculus::{
    coboundary, codifferential, cup, forward_difference, green_residual, hodge, inner_product,
    iota, laplacian,
};
use dklattice::chain::{
    boundary, build_v_full, build_volume, pair_double, star_c, Chain, ChainBasis,
};
use dklattice::dirac_kahler::{
    chiral_project, chiral_star, dirac_kahler, iota_chiral_star, ChiralSector,
};
use dklattice::form::{ComplexCopy, Form, InhomogeneousForm};
use dklattice::lattice::{DirectionSet, LatticeSpec, SiteIndex};
use dklattice::spectral::{
    assemble, certify_flip, certify_prop33, fourier_symbol, spectrum, spectrum_match_distance,
    OperatorKind, RANK_TOL, REAL_TOL,
};

use crate::config::RunConfig;
use crate::report::{real, Report, ReportBuilder};

/// Number of random trials per floating check in `verify`. The acceptance
/// harness runs larger counts; the command stays interactive-fast.
const VERIFY_TRIALS: u64 = 4;

/// Flip residual threshold (per eigenpair of the Dirac–Kähler matrix).
const FLIP_TOL: f64 = 1e-9;

/// Kernel chiral-invariance threshold.
const KERNEL_TOL: f64 = 1e-10;

fn random_form(lat: LatticeSpec, degree: usize, seed: u64) -> Form<f64> {
    Form::random(lat, degree, ComplexCopy::Plain, seed)
}

fn random_omega(lat: LatticeSpec, seed: u64) -> InhomogeneousForm<f64> {
    InhomogeneousForm::random(lat, ComplexCopy::Plain, seed)
}

fn zero_like(lat: LatticeSpec, degree: usize) -> Form<f64> {
    Form::zero(lat, degree, ComplexCopy::Plain)
}

fn omega_diff(a: &InhomogeneousForm<f64>, b: &InhomogeneousForm<f64>) -> f64 {
    a.try_sub(b).expect("same copy").euclidean_norm()
}

pub fn cmd_verify(config: RunConfig) -> Result<Report> {
    let lat = config.lattice_spec();
    let tol = config.tol;
    let seed = config.seed;
    let mut report = ReportBuilder::new("verify", config.clone());

    report.timed_residual(
        "chain.boundary_squared_zero",
        "the boundary of a boundary vanishes on every basis cell",
        tol,
        || {
            let mut worst = 0.0f64;
            for dirs in DirectionSet::all() {
                let cell = Chain::<f64>::basis(ChainBasis::plain(SiteIndex::ORIGIN, dirs));
                worst = worst.max(boundary(&boundary(&cell, &lat), &lat).max_abs_coeff());
            }
            worst
        },
    );

    report.timed_residual(
        "chain.star_involution",
        "applying the chain star twice multiplies a degree-r cell by (-1)^r",
        tol,
        || {
            let mut worst = 0.0f64;
            for dirs in DirectionSet::all() {
                let cell = Chain::<f64>::basis(ChainBasis::plain(SiteIndex::ORIGIN, dirs));
                let sign = if dirs.degree() % 2 == 0 { 1.0 } else { -1.0 };
                let mut twice = star_c(&star_c(&cell));
                twice.add_term(ChainBasis::plain(SiteIndex::ORIGIN, dirs), -sign);
                worst = worst.max(twice.max_abs_coeff());
            }
            worst
        },
    );

    if lat.is_periodic() {
        report.timed_residual(
            "chain.volume_closed",
            "the periodic volume chain has no boundary",
            tol,
            || boundary(&build_volume::<f64>(&lat), &lat).max_abs_coeff(),
        );
    }

    report.timed_residual(
        "calculus.dc_squared_zero",
        "the coboundary squares to zero on random forms of every degree",
        tol,
        || {
            let mut worst = 0.0f64;
            for trial in 0..VERIFY_TRIALS {
                for degree in 0..=2usize {
                    let omega = random_form(lat, degree, seed + 10 * trial + degree as u64);
                    let dd = coboundary(&coboundary(&omega));
                    worst = worst.max(dd.max_abs_diff(&zero_like(lat, degree + 2)));
                }
            }
            worst
        },
    );

    report.timed_residual(
        "calculus.delta_squared_zero",
        "the codifferential squares to zero on random forms of every degree",
        tol,
        || {
            let mut worst = 0.0f64;
            for trial in 0..VERIFY_TRIALS {
                for degree in 2..=4usize {
                    let omega = random_form(lat, degree, seed + 100 + 10 * trial + degree as u64);
                    let dd = codifferential(&codifferential(&omega));
                    worst = worst.max(dd.max_abs_diff(&zero_like(lat, degree - 2)));
                }
            }
            worst
        },
    );

    report.timed_residual(
        "calculus.hodge_involution",
        "applying the metric star twice multiplies a degree-r form by (-1)^(r+1)",
        tol,
        || {
            let mut worst = 0.0f64;
            for degree in 0..=4usize {
                let omega = random_form(lat, degree, seed + 200 + degree as u64);
                let sign = if degree % 2 == 0 { -1.0 } else { 1.0 };
                let expect = omega.scaled(Complex64::new(sign, 0.0));
                worst = worst.max(hodge(&hodge(&omega)).max_abs_diff(&expect));
            }
            worst
        },
    );

    report.timed_residual(
        "calculus.delta_is_star_d_star",
        "the direct codifferential stencil equals the star-coboundary-star composite",
        tol,
        || {
            let mut worst = 0.0f64;
            for degree in 1..=4usize {
                let omega = random_form(lat, degree, seed + 300 + degree as u64);
                let composed = hodge(&coboundary(&hodge(&omega)));
                worst = worst.max(codifferential(&omega).max_abs_diff(&composed));
            }
            worst
        },
    );

    report.timed_residual(
        "calculus.leibniz",
        "the coboundary satisfies the graded product rule over the cup product",
        tol,
        || {
            let mut worst = 0.0f64;
            for trial in 0..VERIFY_TRIALS {
                for a in 0..=3usize {
                    for b in 0..=(3 - a) {
                        let phi = random_form(lat, a, seed + 400 + 20 * trial + a as u64);
                        let psi = random_form(lat, b, seed + 500 + 20 * trial + b as u64);
                        let lhs = coboundary(&cup(&phi, &psi).expect("same copy"));
                        let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
                        let rhs = cup(&coboundary(&phi), &psi)
                            .expect("same copy")
                            .try_add(
                                &cup(&phi, &coboundary(&psi))
                                    .expect("same copy")
                                    .scaled(Complex64::new(sign, 0.0)),
                            )
                            .expect("same copy");
                        worst = worst.max(lhs.max_abs_diff(&rhs));
                    }
                }
            }
            worst
        },
    );

    report.timed_residual(
        "calculus.inner_product_oracle",
        "the Lorentz-sign inner product equals the volume pairing and vanishes across degrees",
        tol,
        || {
            let mut worst = 0.0f64;
            let volume = build_v_full::<f64>(&lat);
            for degree in 0..=4usize {
                let phi = random_form(lat, degree, seed + 600 + degree as u64);
                let omega = random_form(lat, degree, seed + 700 + degree as u64);
                let direct = inner_product(&phi, &omega).expect("same copy");
                let paired =
                    pair_double(&volume, &phi, &hodge(&omega.conjugated())).expect("copies");
                worst = worst.max((direct - paired).norm());
                let other = random_form(lat, (degree + 1) % 5, seed + 800 + degree as u64);
                worst = worst.max(inner_product(&phi, &other).expect("same copy").norm());
            }
            worst
        },
    );

    report.timed_residual(
        "calculus.green_formula",
        "the three-term summation-by-parts identity holds on the configured lattice",
        tol,
        || {
            let mut worst = 0.0f64;
            for trial in 0..VERIFY_TRIALS {
                for degree in 0..=3usize {
                    let phi = random_form(lat, degree, seed + 900 + 10 * trial + degree as u64);
                    let omega =
                        random_form(lat, degree + 1, seed + 1000 + 10 * trial + degree as u64);
                    worst = worst.max(green_residual(&phi, &omega).expect("plain copies"));
                }
            }
            worst
        },
    );

    report.timed_residual(
        "calculus.green_formula_ghost",
        "the three-term summation-by-parts identity holds on a bounded 2^4 patch",
        tol,
        || {
            let ghost = LatticeSpec::ghost([2, 2, 2, 2], 1);
            let mut worst = 0.0f64;
            for trial in 0..VERIFY_TRIALS {
                for degree in 0..=3usize {
                    let phi =
                        random_form(ghost, degree, seed + 1100 + 10 * trial + degree as u64);
                    let omega =
                        random_form(ghost, degree + 1, seed + 1200 + 10 * trial + degree as u64);
                    worst = worst.max(green_residual(&phi, &omega).expect("plain copies"));
                }
            }
            worst
        },
    );

    report.timed_residual(
        "calculus.iota_identities",
        "the copy identification is an involution commuting with star, coboundary and codifferential",
        tol,
        || {
            let mut worst = 0.0f64;
            for degree in 0..=4usize {
                let omega = random_form(lat, degree, seed + 1300 + degree as u64);
                worst = worst.max(iota(&iota(&omega)).max_abs_diff(&omega));
                worst = worst.max(iota(&hodge(&omega)).max_abs_diff(&hodge(&iota(&omega))));
                if degree < 4 {
                    worst = worst
                        .max(iota(&coboundary(&omega)).max_abs_diff(&coboundary(&iota(&omega))));
                }
                if degree >= 1 {
                    worst = worst.max(
                        iota(&codifferential(&omega)).max_abs_diff(&codifferential(&iota(&omega))),
                    );
                }
            }
            worst
        },
    );

    report.timed_residual(
        "calculus.laplacian_definition",
        "the Laplacian is minus the anticommutator of coboundary and codifferential",
        tol,
        || {
            let mut worst = 0.0f64;
            for degree in 0..=4usize {
                let omega = random_form(lat, degree, seed + 1400 + degree as u64);
                let mut expect = zero_like(lat, degree);
                if degree < 4 {
                    expect = expect
                        .try_add(&codifferential(&coboundary(&omega)))
                        .expect("same copy");
                }
                if degree >= 1 {
                    expect = expect
                        .try_add(&coboundary(&codifferential(&omega)))
                        .expect("same copy");
                }
                expect = expect.scaled(Complex64::new(-1.0, 0.0));
                worst = worst.max(laplacian(&omega).max_abs_diff(&expect));
            }
            worst
        },
    );

    report.timed_residual(
        "calculus.scalar_laplacian_stencil",
        "on scalars the Laplacian reduces to the signed second differences",
        tol,
        || {
            let omega = random_form(lat, 0, seed + 1500);
            let second = |axis: usize| forward_difference(&forward_difference(&omega, axis), axis);
            let expect = second(0)
                .try_sub(&second(1))
                .and_then(|f| f.try_sub(&second(2)))
                .and_then(|f| f.try_sub(&second(3)))
                .expect("same copy")
                .scaled(Complex64::new(-1.0, 0.0));
            laplacian(&omega).max_abs_diff(&expect)
        },
    );

    report.timed_residual(
        "dirac.star_involution",
        "the chirality star applied twice is the identity",
        tol,
        || {
            let mut worst = 0.0f64;
            for trial in 0..VERIFY_TRIALS {
                let omega = random_omega(lat, seed + 1600 + trial);
                worst = worst.max(omega_diff(&chiral_star(&chiral_star(&omega)), &omega));
            }
            worst
        },
    );

    report.timed_residual(
        "dirac.star_anticommutation",
        "the chirality star anticommutes with the Dirac-Kahler operator",
        tol,
        || {
            let mut worst = 0.0f64;
            for trial in 0..VERIFY_TRIALS {
                let omega = random_omega(lat, seed + 1700 + trial);
                let sum = chiral_star(&dirac_kahler(&omega))
                    .try_add(&dirac_kahler(&chiral_star(&omega)))
                    .expect("same copy");
                worst = worst.max(sum.euclidean_norm());
            }
            worst
        },
    );

    report.timed_residual(
        "dirac.projector_algebra",
        "the chiral projectors are idempotent, complementary and mutually annihilating",
        tol,
        || {
            let mut worst = 0.0f64;
            for trial in 0..VERIFY_TRIALS {
                let omega = random_omega(lat, seed + 1800 + trial);
                let plus = chiral_project(&omega, ChiralSector::Plus);
                let minus = chiral_project(&omega, ChiralSector::Minus);
                worst = worst.max(omega_diff(&plus.try_add(&minus).expect("same copy"), &omega));
                worst = worst.max(omega_diff(&chiral_project(&plus, ChiralSector::Plus), &plus));
                worst = worst.max(omega_diff(&chiral_project(&minus, ChiralSector::Minus), &minus));
                worst =
                    worst.max(chiral_project(&plus, ChiralSector::Minus).euclidean_norm());
                worst =
                    worst.max(chiral_project(&minus, ChiralSector::Plus).euclidean_norm());
            }
            worst
        },
    );

    report.timed_residual(
        "dirac.projection_duality",
        "the projected parts are eigenvectors of the chirality operator with eigenvalues +1 and -1",
        tol,
        || {
            let mut worst = 0.0f64;
            for trial in 0..VERIFY_TRIALS {
                let omega = random_omega(lat, seed + 1900 + trial);
                for sector in [ChiralSector::Plus, ChiralSector::Minus] {
                    let part = chiral_project(&omega, sector);
                    let reflected = iota_chiral_star(&part);
                    let expect =
                        part.scaled(Complex64::new(sector.sign() as f64, 0.0));
                    worst = worst.max(omega_diff(&reflected, &expect));
                }
            }
            worst
        },
    );

    report.timed_residual(
        "dirac.flip_exchange",
        "the Dirac-Kahler operator swaps the two chiral sectors",
        tol,
        || {
            let mut worst = 0.0f64;
            for trial in 0..VERIFY_TRIALS {
                let omega = random_omega(lat, seed + 2000 + trial);
                for sector in [ChiralSector::Plus, ChiralSector::Minus] {
                    let lhs = dirac_kahler(&chiral_project(&omega, sector));
                    let rhs = chiral_project(&dirac_kahler(&omega), sector.opposite());
                    worst = worst.max(omega_diff(&lhs, &rhs));
                }
            }
            worst
        },
    );

    Ok(report.finish())
}

fn total_order(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Eigenvalues of every 16×16 Fourier symbol over the lattice momenta, as
/// one sorted multiset.
fn symbol_spectrum_union(extents: [usize; 4]) -> Result<Vec<Complex64>> {
    let mut union = Vec::new();
    let mut mode = [0usize; 4];
    loop {
        let theta = std::array::from_fn(|a| {
            std::f64::consts::TAU * mode[a] as f64 / extents[a] as f64
        });
        let block = fourier_symbol(OperatorKind::DiracKahler, theta);
        union.extend(spectrum(&block).context("symbol eigensolve")?);
        let mut axis = 3usize;
        loop {
            mode[axis] += 1;
            if mode[axis] < extents[axis] {
                break;
            }
            mode[axis] = 0;
            if axis == 0 {
                union.sort_by(total_order);
                return Ok(union);
            }
            axis -= 1;
        }
    }
}

/// Path of the CSV next to the report: `<out>.csv`, or `spectrum.csv` when
/// the report goes to standard output.
fn csv_path(config: &RunConfig) -> PathBuf {
    match &config.out {
        Some(path) => path.with_extension("csv"),
        None => PathBuf::from("spectrum.csv"),
    }
}

pub fn cmd_spectrum(config: RunConfig) -> Result<Report> {
    if !config.is_periodic() {
        bail!("spectrum requires --boundary periodic: eigenvalues are only defined for the wrap-around closure");
    }
    let lat = config.lattice_spec();
    let matrix = assemble(&lat, OperatorKind::DiracKahler)
        .context("assembling the Dirac-Kahler matrix (is the lattice within the dense-size budget?)")?;
    let start = std::time::Instant::now();
    let eigenvalues = spectrum(&matrix).context("dense eigensolve")?;
    let solve_ms = start.elapsed().as_secs_f64() * 1e3;

    let path = csv_path(&config);
    let mut csv = String::from("index,re,im\n");
    for (index, lambda) in eigenvalues.iter().enumerate() {
        csv.push_str(&format!("{index},{},{}\n", real(lambda.re), real(lambda.im)));
    }
    std::fs::write(&path, csv).with_context(|| format!("writing {}", path.display()))?;

    let mut report = ReportBuilder::new("spectrum", config);
    let expected_rows = 16 * lat.num_volume_sites();
    report.residual_check(
        "spectrum.row_count",
        "the CSV holds one eigenvalue per channel and site",
        (eigenvalues.len() as f64 - expected_rows as f64).abs(),
        0.0,
        solve_ms,
    );

    let start = std::time::Instant::now();
    let oracle = symbol_spectrum_union(lat.extents)?;
    let worst = spectrum_match_distance(&eigenvalues, &oracle);
    report.residual_check(
        "spectrum.symbol_union",
        "the matrix spectrum equals the union of the Fourier-symbol eigenvalues over all momenta",
        worst,
        FLIP_TOL,
        start.elapsed().as_secs_f64() * 1e3,
    );
    Ok(report.finish())
}

pub fn cmd_chirality(config: RunConfig) -> Result<Report> {
    if !config.is_periodic() {
        bail!("chirality certification requires --boundary periodic");
    }
    for &mass in &config.masses {
        if !(mass > 0.0) {
            bail!("masses must be positive, got {mass}");
        }
    }
    let lat = config.lattice_spec();

    let start = std::time::Instant::now();
    let flip = certify_flip(&lat).context("chirality-flip certification")?;
    let flip_ms = start.elapsed().as_secs_f64() * 1e3;

    // Certify the mass gap at the configured masses plus every positive
    // real eigenvalue (the hardest points: the eigenvalue equation alone
    // is singular there).
    let mut masses = config.masses.clone();
    for cert in &flip.certificates {
        if !masses.iter().any(|&m| (m - cert.eigenvalue).abs() <= REAL_TOL) {
            masses.push(cert.eigenvalue);
        }
    }
    masses.sort_by(f64::total_cmp);

    let start = std::time::Instant::now();
    let gaps = certify_prop33(&lat, &masses).context("mass-gap certification")?;
    let gap_ms = start.elapsed().as_secs_f64() * 1e3 / gaps.len() as f64;

    let mut report = ReportBuilder::new("chirality", config);
    for cert in &gaps {
        let sector = match cert.sector {
            ChiralSector::Plus => "self_dual",
            ChiralSector::Minus => "anti_self_dual",
        };
        report.gap_check(
            &format!("chirality.mass_gap[m={},{}]", cert.mass, sector),
            "least singular value of the stacked eigenvalue/duality system; must exceed the threshold",
            cert.smin,
            RANK_TOL,
            gap_ms,
        );
    }
    for cert in &flip.certificates {
        report.residual_check(
            &format!("chirality.flip[lambda={}]", cert.eigenvalue),
            "the operator maps each chiral part of an eigenform onto the opposite part",
            cert.residual_plus.max(cert.residual_minus),
            FLIP_TOL,
            flip_ms / (flip.certificates.len().max(1)) as f64,
        );
    }
    report.residual_check(
        "chirality.kernel_invariance",
        "both chiral projections of every massless kernel form are again massless solutions",
        flip.max_kernel_residual,
        KERNEL_TOL,
        flip_ms,
    );
    Ok(report.finish())
}
