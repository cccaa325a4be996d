//! Subcommand implementations. Each one reads a resolved [`RunConfig`],
//! calls into the library, and writes a CSV or JSON artifact.

use std::path::Path;

use copolypin::{
    annealed, bounds, disorder, quenched, variational, HamiltonianMode, ModelParams,
    PseudoCritical, QuenchedError,
};

use crate::config::RunConfig;
use crate::output::{cell, emit_json, json_num, write_artifact, Csv};
use crate::CliError;

pub fn annealed_solve(cfg: &RunConfig) -> Result<(), CliError> {
    let params = cfg.params()?;
    let rho = cfg.rho()?;
    let law_hat = cfg.law_hat()?;
    let law_bar = cfg.law_bar()?;
    let report = annealed::classify_ann(&params, &rho, &law_hat, &law_bar, cfg.tol);
    let hc_copolymer = annealed::hc_ann_copolymer(params.beta_hat, &law_hat).ok();
    let value = serde_json::json!({
        "model": model_echo(&params),
        "g_ann": json_num(report.g_ann),
        "g_hat_ann": json_num(report.g_hat_ann),
        "h_bar_star": json_num(report.h_bar_star),
        "label": report.label.to_string(),
        "annealed_tilt": json_num(annealed::annealed_tilt(params.beta_hat, params.h_hat, &law_hat)),
        "hc_ann_copolymer": hc_copolymer.map_or(serde_json::Value::Null, json_num),
        "hc_ann_pinning": json_num(annealed::hc_ann_pinning(params.beta_bar, &law_bar)),
    });
    emit_json(cfg.output.as_deref(), &value)
}

pub fn annealed_curve(cfg: &RunConfig) -> Result<(), CliError> {
    let params = cfg.params()?;
    require_copolymer_coupling(&params)?;
    let rho = cfg.rho()?;
    let law_hat = cfg.law_hat()?;
    let law_bar = cfg.law_bar()?;
    let alpha = cfg.tail_exponent(&rho)?;
    let monthus = bounds::monthus_line(params.beta_hat, alpha, &law_hat);
    let gamma_grid = bounds::default_exponent_grid(alpha);
    let mut csv = Csv::new(
        "annealed-curve",
        &["h_bar", "hc_ann", "hc_que_upper", "hc_que_lower", "monthus", "g_ann"],
    );
    for h_bar in cfg.grid.values() {
        let hc_ann = annealed::hc_ann_combined(
            params.beta_hat,
            params.beta_bar,
            h_bar,
            &rho,
            &law_hat,
            &law_bar,
            cfg.tol,
        )?
        .to_f64();
        // The fractional-moment argument only covers a deterministic
        // pinning penalty; with pinning disorder the annealed curve is the
        // best upper bound available here.
        let upper = if params.beta_bar == 0.0 {
            let frac = bounds::fractional_moment_hc_upper(
                params.beta_hat,
                h_bar,
                &gamma_grid,
                &rho,
                &law_hat,
                cfg.tol,
            )?;
            frac.upper.to_f64().min(hc_ann)
        } else {
            hc_ann
        };
        let point = ModelParams { h_bar, ..params };
        let g = annealed::g_ann(&point, &rho, &law_hat, &law_bar, cfg.tol);
        csv.row(&[cell(h_bar), cell(hc_ann), cell(upper), cell(monthus), cell(monthus), cell(g)]);
    }
    write_csv(cfg, csv)
}

pub fn quenched_estimate(cfg: &RunConfig) -> Result<(), CliError> {
    let params = cfg.params()?;
    let rho = cfg.rho()?;
    let law_hat = cfg.law_hat()?;
    let law_bar = cfg.law_bar()?;
    require_volume(cfg)?;
    require_replicas(cfg)?;
    let est = quenched::estimate_g_que(
        &params,
        &rho,
        &law_hat,
        &law_bar,
        cfg.n,
        cfg.replicas,
        cfg.seed,
    )?;
    let mut csv = Csv::new(
        "quenched-estimate",
        &["n", "g_hat", "stderr", "replicas", "seed"],
    );
    for (i, &m) in est.n_grid.iter().enumerate() {
        csv.row(&[
            m.to_string(),
            cell(est.means[i]),
            cell(est.stderrs[i]),
            est.replicas.to_string(),
            est.seed.to_string(),
        ]);
    }
    write_csv(cfg, csv)
}

pub fn quenched_curve(cfg: &RunConfig) -> Result<(), CliError> {
    let params = cfg.params()?;
    require_copolymer_coupling(&params)?;
    let rho = cfg.rho()?;
    let law_hat = cfg.law_hat()?;
    let law_bar = cfg.law_bar()?;
    require_volume(cfg)?;
    require_replicas(cfg)?;
    let mut csv = Csv::new(
        "quenched-curve",
        &["h_bar", "h_hat_critical", "ci_lo", "ci_hi", "n", "replicas", "seed"],
    );
    for h_bar in cfg.grid.values() {
        let (est, lo, hi) = match quenched::pseudo_critical_hhat(
            params.beta_hat,
            params.beta_bar,
            h_bar,
            &rho,
            &law_hat,
            &law_bar,
            cfg.n,
            cfg.replicas,
            cfg.seed,
        ) {
            Ok(PseudoCritical::Bracketed { estimate, ci }) => (estimate, ci.0, ci.1),
            Ok(PseudoCritical::Unbounded { probed_up_to }) => {
                (f64::INFINITY, probed_up_to, f64::INFINITY)
            }
            // Delocalized down to the smallest probed bias: no estimate.
            Err(QuenchedError::NoBracket) => (f64::NAN, f64::NAN, f64::NAN),
            Err(e) => return Err(e.into()),
        };
        csv.row(&[
            cell(h_bar),
            cell(est),
            cell(lo),
            cell(hi),
            cfg.n.to_string(),
            cfg.replicas.to_string(),
            cfg.seed.to_string(),
        ]);
    }
    write_csv(cfg, csv)
}

pub fn quenched_paths(cfg: &RunConfig) -> Result<(), CliError> {
    let params = cfg.params()?;
    let rho = cfg.rho()?;
    let law_hat = cfg.law_hat()?;
    let law_bar = cfg.law_bar()?;
    require_volume(cfg)?;
    let sample = disorder::sample(&law_hat, &law_bar, cfg.n, cfg.seed, 0);
    let table = quenched::dp_log_partition(&params, &rho, &sample, HamiltonianMode::Excess)?;
    let mut paths = Vec::with_capacity(cfg.paths);
    for p in 0..cfg.paths {
        let path = quenched::sample_path(&table, cfg.seed.wrapping_add(p as u64))?;
        paths.push(serde_json::json!({
            "return_times": path.return_times,
            "excursion_signs": path.excursion_signs,
            "m_n": path.m_n,
        }));
    }
    let value = serde_json::json!({
        "model": model_echo(&params),
        "n": cfg.n,
        "seed": cfg.seed,
        "log_partition": json_num(table.log_partition()),
        "paths": paths,
    });
    emit_json(cfg.output.as_deref(), &value)
}

pub fn bounds_curve(cfg: &RunConfig) -> Result<(), CliError> {
    let params = cfg.params()?;
    require_copolymer_coupling(&params)?;
    let rho = cfg.rho()?;
    let law_hat = cfg.law_hat()?;
    let law_bar = cfg.law_bar()?;
    require_volume(cfg)?;
    require_replicas(cfg)?;
    let alpha = cfg.tail_exponent(&rho)?;
    let monthus = bounds::monthus_line(params.beta_hat, alpha, &law_hat);
    let gamma_grid = bounds::default_exponent_grid(alpha);
    let mut csv = Csv::new(
        "bounds-curve",
        &["h_bar", "monthus", "frac_moment_upper", "annealed_curve", "quenched_estimate", "ci"],
    );
    for h_bar in cfg.grid.values() {
        let frac = bounds::fractional_moment_hc_upper(
            params.beta_hat,
            h_bar,
            &gamma_grid,
            &rho,
            &law_hat,
            cfg.tol,
        )?
        .upper
        .to_f64();
        let ann = annealed::hc_ann_combined(
            params.beta_hat,
            params.beta_bar,
            h_bar,
            &rho,
            &law_hat,
            &law_bar,
            cfg.tol,
        )?
        .to_f64();
        let (est, ci) = match quenched::pseudo_critical_hhat(
            params.beta_hat,
            params.beta_bar,
            h_bar,
            &rho,
            &law_hat,
            &law_bar,
            cfg.n,
            cfg.replicas,
            cfg.seed,
        ) {
            Ok(PseudoCritical::Bracketed { estimate, ci }) => (estimate, 0.5 * (ci.1 - ci.0)),
            Ok(PseudoCritical::Unbounded { .. }) => (f64::INFINITY, f64::NAN),
            Err(QuenchedError::NoBracket) => (f64::NAN, f64::NAN),
            Err(e) => return Err(e.into()),
        };
        csv.row(&[cell(h_bar), cell(monthus), cell(frac), cell(ann), cell(est), cell(ci)]);
    }
    write_csv(cfg, csv)
}

pub fn variational_check(cfg: &RunConfig) -> Result<(), CliError> {
    let params = cfg.params()?;
    let rho = cfg.rho()?;
    let law_hat = cfg.law_hat()?;
    let law_bar = cfg.law_bar()?;
    let g_hat = annealed::g_hat_ann(params.beta_hat, params.h_hat, &law_hat);
    let g = cfg.g.unwrap_or(g_hat);
    if g < g_hat {
        return Err(CliError::Config(format!(
            "g = {g} lies below the annealed excess free energy {g_hat}"
        )));
    }
    let (q, dropped) = variational::maximizer_q(&params, g, &rho, &law_hat, &law_bar, cfg.max_len)?;
    let functional = variational::annealed_functional(&q, &params, g, &rho, &law_hat, &law_bar)?;
    let s = annealed::s_ann(&params, &rho, &law_hat, &law_bar, g, cfg.tol).to_f64();
    let value = serde_json::json!({
        "functional_value": json_num(functional),
        "s_ann": json_num(s),
        "delta": json_num(s - functional),
        "tr": cfg.max_len,
        "truncated_mass": json_num(dropped),
        "g": json_num(g),
        "mean_len": json_num(q.mean_len()),
    });
    emit_json(cfg.output.as_deref(), &value)
}

pub fn variational_gap(cfg: &RunConfig) -> Result<(), CliError> {
    let params = cfg.params()?;
    require_copolymer_coupling(&params)?;
    let rho = cfg.rho()?;
    let law_hat = cfg.law_hat()?;
    let law_bar = cfg.law_bar()?;
    let alpha = cfg.tail_exponent(&rho)?;
    if alpha <= 1.0 {
        return Err(CliError::Config(format!(
            "gap certificates need a tail exponent above 1, got {alpha}"
        )));
    }
    let cert = variational::gap_certificate(
        params.beta_hat,
        params.beta_bar,
        params.h_bar,
        alpha,
        &rho,
        &law_hat,
        &law_bar,
        cfg.tr,
        cfg.tol,
    )?;
    let value = serde_json::json!({
        "functional_value": serde_json::Value::Null,
        "s_ann": serde_json::Value::Null,
        "delta": json_num(cert.delta),
        "tr": cert.tr,
        "truncated_mass": serde_json::Value::Null,
        "h_hat_critical": json_num(cert.h_hat_critical),
        "mean_len_truncated": json_num(cert.mean_len_truncated),
        "marginal_entropy": json_num(cert.marginal_entropy),
    });
    emit_json(cfg.output.as_deref(), &value)
}

pub fn scan(cfg: &RunConfig) -> Result<(), CliError> {
    let params = cfg.params()?;
    require_copolymer_coupling(&params)?;
    let rho = cfg.rho()?;
    let law_hat = cfg.law_hat()?;
    let law_bar = cfg.law_bar()?;
    require_volume(cfg)?;
    require_replicas(cfg)?;
    let alpha = cfg.tail_exponent(&rho)?;
    let monthus = bounds::monthus_line(params.beta_hat, alpha, &law_hat);
    let gamma_grid = bounds::default_exponent_grid(alpha);
    let grid = cfg.grid.values();
    let mut csv = Csv::new(
        "scan",
        &[
            "h_bar",
            "hc_ann",
            "monthus",
            "frac_moment_upper",
            "hc_que_estimate",
            "ci_lo",
            "ci_hi",
            "wetting_ann",
            "wetting_que",
        ],
    );
    if grid.is_empty() {
        return write_csv(cfg, csv);
    }
    let wet = bounds::wetting_thresholds(
        params.beta_bar,
        &rho,
        &law_bar,
        cfg.n,
        cfg.replicas,
        cfg.seed,
    )?;
    for h_bar in grid {
        let hc_ann = annealed::hc_ann_combined(
            params.beta_hat,
            params.beta_bar,
            h_bar,
            &rho,
            &law_hat,
            &law_bar,
            cfg.tol,
        )?
        .to_f64();
        let frac = bounds::fractional_moment_hc_upper(
            params.beta_hat,
            h_bar,
            &gamma_grid,
            &rho,
            &law_hat,
            cfg.tol,
        )?
        .upper
        .to_f64();
        let (est, lo, hi) = match quenched::pseudo_critical_hhat(
            params.beta_hat,
            params.beta_bar,
            h_bar,
            &rho,
            &law_hat,
            &law_bar,
            cfg.n,
            cfg.replicas,
            cfg.seed,
        ) {
            Ok(PseudoCritical::Bracketed { estimate, ci }) => (estimate, ci.0, ci.1),
            Ok(PseudoCritical::Unbounded { probed_up_to }) => {
                (f64::INFINITY, probed_up_to, f64::INFINITY)
            }
            Err(QuenchedError::NoBracket) => (f64::NAN, f64::NAN, f64::NAN),
            Err(e) => return Err(e.into()),
        };
        csv.row(&[
            cell(h_bar),
            cell(hc_ann),
            cell(monthus),
            cell(frac),
            cell(est),
            cell(lo),
            cell(hi),
            cell(wet.annealed),
            cell(wet.quenched_estimate),
        ]);
    }
    write_csv(cfg, csv)
}

fn model_echo(params: &ModelParams) -> serde_json::Value {
    serde_json::json!({
        "beta_hat": params.beta_hat,
        "h_hat": params.h_hat,
        "beta_bar": params.beta_bar,
        "h_bar": params.h_bar,
    })
}

fn write_csv(cfg: &RunConfig, csv: Csv) -> Result<(), CliError> {
    let text = csv.into_string();
    match cfg.output.as_deref() {
        Some(path) => write_artifact(Path::new(path), &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn require_copolymer_coupling(params: &ModelParams) -> Result<(), CliError> {
    if params.beta_hat > 0.0 {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "this subcommand needs beta_hat > 0, got {}",
            params.beta_hat
        )))
    }
}

fn require_volume(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.n >= 1 {
        Ok(())
    } else {
        Err(CliError::Config("chain length n must be at least 1".into()))
    }
}

fn require_replicas(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.replicas >= 2 {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "need at least two replicas for an error bar, got {}",
            cfg.replicas
        )))
    }
}
