use mudr_core::bounds::{self, RateRegion, CURVE_WATERFILL};
use mudr_core::mcsim::{self, McReport, WaveformSpec};
use mudr_core::scenario::{load_scenario, range_from_delay, Scenario};
use mudr_core::waterfill::default_alpha_grid;
use mudr_core::Scenario64;

use crate::output::{Cell, Csv, OutputDir, RunManifest};
use crate::svg::{Plot, Series};
use crate::{
    CliError, Experiment, Outcome, PentagonArgs, RegionArgs, ScenarioArgs, SweepArgs, ValidateArgs,
};

const BUNDLED: &str = "bundled:table2.json";

fn load(args: &ScenarioArgs) -> Result<(Scenario64, String), CliError> {
    match &args.scenario {
        Some(path) => Ok((load_scenario(path)?, path.display().to_string())),
        None => Ok((Scenario::table2(), BUNDLED.to_string())),
    }
}

fn alpha_grid(points: usize) -> Result<Vec<f64>, CliError> {
    if points == 0 {
        return Err(CliError::Input("--alpha-points must be at least 1".into()));
    }
    Ok(default_alpha_grid(points))
}

pub fn region_csv(region: &RateRegion<f64>) -> Vec<u8> {
    let mut csv = Csv::new(&["curve_label", "alpha_or_nan", "r_est_bps", "r_com_bps", "self_consistent"]);
    for curve in &region.curves {
        if curve.label == CURVE_WATERFILL {
            for p in &region.waterfill_points {
                csv.row(&[
                    Cell::Text(&curve.label),
                    Cell::Num(p.split.alpha),
                    Cell::Num(p.r_est),
                    Cell::Num(p.r_com()),
                    Cell::Bool(p.self_consistent),
                ]);
            }
        } else {
            for p in &curve.points {
                csv.row(&[
                    Cell::Text(&curve.label),
                    Cell::Num(f64::NAN),
                    Cell::Num(p.r_est),
                    Cell::Num(p.r_com),
                    Cell::Bool(true),
                ]);
            }
        }
    }
    csv.into_bytes()
}

fn region_svg(region: &RateRegion<f64>) -> Vec<u8> {
    let series = region
        .curves
        .iter()
        .map(|c| Series {
            label: c.label.clone(),
            points: c.points.iter().map(|p| (p.r_est, p.r_com)).collect(),
            closed: false,
            dashed: c.label == bounds::CURVE_HULL,
        })
        .collect();
    Plot {
        title: "Estimation rate and data rate bounds".into(),
        x_label: "Estimation rate (bits/s)".into(),
        y_label: "Data rate (bits/s)".into(),
        series,
    }
    .render()
    .into_bytes()
}

pub fn region(args: &RegionArgs) -> Result<Outcome, CliError> {
    let (scenario, path) = load(&args.scenario)?;
    let grid = alpha_grid(args.alpha_points)?;
    let region = bounds::rate_region(&scenario.link_budget()?, &grid)?;

    let mut out = OutputDir::create(&args.out.out)?;
    out.write("region.csv", &region_csv(&region))?;
    out.write("region.svg", &region_svg(&region))?;
    let manifest = RunManifest::new("region", &path).param("alpha_points", args.alpha_points);
    report_written(out.finish(manifest)?);
    Ok(Outcome::Done)
}

fn db_to_snr(db: f64, flag: &str) -> Result<f64, CliError> {
    if !db.is_finite() {
        return Err(CliError::Input(format!("{flag} must be finite, got {db}")));
    }
    Ok(10f64.powf(db / 10.0))
}

pub fn pentagon(args: &PentagonArgs) -> Result<Outcome, CliError> {
    let snr1 = db_to_snr(args.snr1_db, "--snr1-db")?;
    let snr2 = db_to_snr(args.snr2_db, "--snr2-db")?;
    let p = bounds::ma_pentagon(snr1, snr2)?;

    let mut csv = Csv::new(&["element", "r1_bits_per_use", "r2_bits_per_use"]);
    let mut put = |name: &str, xy: [f64; 2]| csv.row(&[Cell::Text(name), Cell::Num(xy[0]), Cell::Num(xy[1])]);
    put("vertex_a", p.vertex_a);
    put("vertex_b", p.vertex_b);
    for corner in p.polygon() {
        put("corner", corner);
    }
    let lines = [
        ("r1_bound", [[p.r1_max, 0.0], [p.r1_max, p.sum_max]]),
        ("r2_bound", [[0.0, p.r2_max], [p.sum_max, p.r2_max]]),
        ("sum_bound", [[p.sum_max, 0.0], [0.0, p.sum_max]]),
    ];
    for (name, ends) in lines {
        put(name, ends[0]);
        put(name, ends[1]);
    }

    let mut series = vec![Series {
        label: "region".into(),
        points: p.polygon().iter().map(|c| (c[0], c[1])).collect(),
        closed: true,
        dashed: false,
    }];
    for (name, ends) in lines {
        series.push(Series {
            label: name.into(),
            points: ends.iter().map(|c| (c[0], c[1])).collect(),
            closed: false,
            dashed: true,
        });
    }
    let svg = Plot {
        title: "Multiple-access pentagon".into(),
        x_label: "R1 (bits/channel use)".into(),
        y_label: "R2 (bits/channel use)".into(),
        series,
    }
    .render();

    let mut out = OutputDir::create(&args.out.out)?;
    out.write("pentagon.csv", &csv.into_bytes())?;
    out.write("pentagon.svg", svg.as_bytes())?;
    let manifest = RunManifest::new("pentagon", "")
        .param("snr1_db", args.snr1_db)
        .param("snr2_db", args.snr2_db);
    report_written(out.finish(manifest)?);
    Ok(Outcome::Done)
}

/// Rescales radar power so the integrated SNR of the first target is `isnr`.
pub fn scale_to_isnr(s: &mut Scenario64, isnr: f64) -> Result<(), CliError> {
    if !(isnr.is_finite() && isnr > 0.0) {
        return Err(CliError::Input(format!("--isnr must be finite and > 0, got {isnr}")));
    }
    let base = s.link_budget()?.integrated_snr(0)?;
    if base.is_nan() || base <= 0.0 {
        return Err(CliError::Input("scenario has zero integrated SNR; cannot rescale".into()));
    }
    let power = s.radar_power_w * (isnr / base);
    s.set_field("radar_power_w", power)?;
    Ok(())
}

/// Sets the process range spread so that `σ_τ,proc · B = spread`.
pub fn set_spread(s: &mut Scenario64, spread: f64) -> Result<(), CliError> {
    if !(spread.is_finite() && spread >= 0.0) {
        return Err(CliError::Input(format!("--spread must be finite and >= 0, got {spread}")));
    }
    let std_m = range_from_delay(spread / s.bandwidth_hz);
    s.set_field("process_range_std_m", std_m)?;
    Ok(())
}

pub fn validate(args: &ValidateArgs) -> Result<Outcome, CliError> {
    let seed = match args.seed {
        Some(s) => s,
        None => {
            eprintln!("mudr: no --seed given, using seed 0");
            0
        }
    };
    let (mut scenario, path) = load(&args.scenario)?;
    if let Some(isnr) = args.isnr {
        scale_to_isnr(&mut scenario, isnr)?;
    }
    if let Some(spread) = args.spread {
        set_spread(&mut scenario, spread)?;
    }
    let spec = WaveformSpec {
        n_samples: args.samples,
        oversample: args.oversample,
        spectral_shape: scenario.spectral_shape,
        ..WaveformSpec::default()
    };
    let lb = scenario.link_budget()?;
    let report: McReport = match args.experiment {
        Experiment::Crb => mcsim::crb_experiment(&lb, &spec, args.trials, seed)?,
        Experiment::Residual => mcsim::residual_experiment(&lb, &spec, args.trials, seed)?,
        Experiment::Gamma => mcsim::gamma_experiment(&spec, args.trials, seed)?,
    };
    println!(
        "{}: empirical {:e} analytic {:e} rel_error {:.4} tolerance {} -> {}",
        report.experiment,
        report.empirical,
        report.analytic,
        report.rel_error,
        report.tolerance,
        if report.pass { "pass" } else { "FAIL" }
    );

    let mut out = OutputDir::create(&args.out.out)?;
    let name = format!("validate_{}.json", args.experiment.name());
    out.write_json(&name, &report)?;
    let mut manifest = RunManifest::new("validate", &path)
        .param("experiment", args.experiment.name())
        .param("trials", args.trials)
        .param("samples", args.samples)
        .param("oversample", args.oversample);
    if let Some(isnr) = args.isnr {
        manifest = manifest.param("isnr", isnr);
    }
    if let Some(spread) = args.spread {
        manifest = manifest.param("spread", spread);
    }
    manifest.seed = Some(seed);
    report_written(out.finish(manifest)?);
    Ok(if report.pass { Outcome::Done } else { Outcome::CheckFailed })
}

pub fn sweep(args: &SweepArgs) -> Result<Outcome, CliError> {
    let (scenario, path) = load(&args.scenario)?;
    if !Scenario64::FIELDS.contains(&args.vary.as_str()) {
        return Err(CliError::Input(format!(
            "unknown sweep field `{}`; valid fields: {}",
            args.vary,
            Scenario64::FIELDS.join(", ")
        )));
    }
    let grid = alpha_grid(args.alpha_points)?;

    let mut regions = Vec::with_capacity(args.values.len());
    let mut summary = Csv::new(&[
        "value",
        "est_outer_rate_bps",
        "comms_outer_rate_bps",
        "sic_comms_rate_bps",
    ]);
    for &value in &args.values {
        let mut s = scenario.clone();
        s.set_field(&args.vary, value)?;
        let lb = s.link_budget()?;
        summary.row(&[
            Cell::Num(value),
            Cell::Num(bounds::est_outer_rate(&lb)?),
            Cell::Num(bounds::comms_outer_rate(&lb)),
            Cell::Num(bounds::sic_comms_rate(&lb)),
        ]);
        regions.push(bounds::rate_region(&lb, &grid)?);
    }

    let mut out = OutputDir::create(&args.out.out)?;
    for (i, region) in regions.iter().enumerate() {
        out.write(&format!("region_{}_{i}.csv", args.vary), &region_csv(region))?;
    }
    out.write("summary.csv", &summary.into_bytes())?;
    let manifest = RunManifest::new("sweep", &path)
        .param("vary", args.vary.as_str())
        .param("values", args.values.clone())
        .param("alpha_points", args.alpha_points);
    report_written(out.finish(manifest)?);
    Ok(Outcome::Done)
}

fn report_written(files: Vec<String>) {
    for f in files {
        println!("wrote {f}");
    }
}
