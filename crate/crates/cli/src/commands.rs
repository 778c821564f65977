// SPDX-License-Identifier: Apache-2.0

//! Sweep commands. Each grid point gets its own child stream of the run seed
//! and rows are assembled in grid order, so tables do not depend on threading.

use rayon::prelude::*;
use serde::Serialize;

use biq_core::entpower::entangling_power;
use biq_core::fidelity::{chi_f, favg_analytic, favg_mc, fprod_analytic, fprod_mc};
use biq_core::orbit::{delta_ec_mc, orbit_bounds};
use biq_core::{ComplexMatrix, KrausChannel, SampleStream, TwoCopyTable, ValidationReport};

use crate::config::{Grid, RunConfig};
use crate::error::{CliError, CliResult};
use crate::family::ChannelSpec;
use crate::table::{Metadata, SweepTable};

/// Stream id of the run root; point `i` uses `root.child(i)`.
const ROOT_STREAM: u64 = 0;

fn root(config: &RunConfig) -> SampleStream {
    SampleStream::new(config.seed, ROOT_STREAM)
}

fn metadata(command: &str, spec: &ChannelSpec, config: &RunConfig) -> Metadata {
    Metadata::new(command, spec.to_string(), config.seed, config.samples)
}

fn evaluate<F>(points: &[f64], root: SampleStream, f: F) -> CliResult<Vec<Vec<f64>>>
where
    F: Fn(f64, SampleStream) -> CliResult<Vec<f64>> + Sync,
{
    points.par_iter().enumerate().map(|(i, &x)| f(x, root.child(i as u64))).collect()
}

fn two_qubit(ch: &KrausChannel, command: &str) -> CliResult<()> {
    if !ch.is_two_qubit() {
        return Err(CliError::Usage(format!(
            "`{command}` needs a two-qubit channel, got dA={}, dB={}",
            ch.d_a(),
            ch.d_b()
        )));
    }
    Ok(())
}

/// Analytic and sampled fidelities, optionally relative to a unitary target.
pub fn cmd_fidelity(
    spec: &ChannelSpec,
    grid: &Grid,
    target: Option<(&str, &ComplexMatrix)>,
    config: &RunConfig,
) -> CliResult<SweepTable> {
    let (pname, punit) = spec.parameter();
    let mut meta = metadata("fidelity", spec, config);
    meta.grids.insert(pname.into(), *grid);
    meta.target = target.map(|(name, _)| name.to_string());
    let mut table = SweepTable::new(meta)
        .column(pname, punit)
        .column("f_avg", "1")
        .column("f_prod", "1")
        .column("chi_F", "1")
        .mc_column("f_avg_mc", "1")
        .mc_column("f_prod_mc", "1");
    let n = config.samples;
    let rows = evaluate(&grid.points(), root(config), |x, stream| {
        let mut ch = spec.at(x)?;
        if let Some((_, u)) = target {
            ch = ch.error_channel(u)?;
        }
        let avg = favg_mc(&ch, n, &stream.child(0))?;
        let prod = fprod_mc(&ch, n, &stream.child(1))?;
        Ok(vec![x, favg_analytic(&ch), fprod_analytic(&ch), chi_f(&ch), avg.mean, avg.stderr, prod.mean, prod.stderr])
    })?;
    rows.into_iter().for_each(|r| table.push_row(r));
    Ok(table)
}

/// Entangling powers over Haar product inputs with the analytic bounds.
pub fn cmd_entpower(spec: &ChannelSpec, grid: &Grid, config: &RunConfig) -> CliResult<SweepTable> {
    let (pname, punit) = spec.parameter();
    let mut meta = metadata("entpower", spec, config);
    meta.grids.insert(pname.into(), *grid);
    let mut table = SweepTable::new(meta)
        .column(pname, punit)
        .mc_column("e_C", "1")
        .mc_column("e_N", "1")
        .mc_column("e_L", "1")
        .mc_column("e_C2", "1")
        .column("lower", "1")
        .column("upper", "1")
        .column("e_N_upper", "1")
        .column("e_L_analytic", "1")
        .column("delta_P", "1");
    let n = config.samples;
    let rows = evaluate(&grid.points(), root(config), |x, stream| {
        let ch = spec.at(x)?;
        two_qubit(&ch, "entpower")?;
        let r = entangling_power(&ch, n, &stream)?;
        Ok(vec![
            x,
            r.e_c.mean,
            r.e_c.stderr,
            r.e_n.mean,
            r.e_n.stderr,
            r.e_l.mean,
            r.e_l.stderr,
            r.e_c2.mean,
            r.e_c2.stderr,
            r.lower_bound,
            r.upper_bound,
            r.e_n_upper,
            r.e_l_analytic,
            r.delta_p_avg,
        ])
    })?;
    rows.into_iter().for_each(|r| table.push_row(r));
    Ok(table)
}

/// `e_C` against its two-copy bounds.
pub fn cmd_bounds(spec: &ChannelSpec, grid: &Grid, config: &RunConfig) -> CliResult<SweepTable> {
    let (pname, punit) = spec.parameter();
    let mut meta = metadata("bounds", spec, config);
    meta.grids.insert(pname.into(), *grid);
    let mut table = SweepTable::new(meta)
        .column(pname, punit)
        .column("e_C_mc", "1")
        .column("e_C_err", "1")
        .column("lower", "1")
        .column("upper", "1")
        .column("global_impurity", "1");
    let n = config.samples;
    let rows = evaluate(&grid.points(), root(config), |x, stream| {
        let ch = spec.at(x)?;
        two_qubit(&ch, "bounds")?;
        let b = orbit_bounds(&TwoCopyTable::new(&ch)?, 0.0)?;
        let e_c = biq_core::entpower::e_c_mc(&ch, n, &stream)?;
        Ok(vec![x, e_c.mean, e_c.stderr, b.lower, b.upper, b.global_impurity])
    })?;
    rows.into_iter().for_each(|r| table.push_row(r));
    Ok(table)
}

/// Long-format `(param, θ)` table of `Δe_C` and its bounds.
pub fn cmd_variation(spec: &ChannelSpec, grid: &Grid, theta: &Grid, config: &RunConfig) -> CliResult<SweepTable> {
    let (pname, punit) = spec.parameter();
    let mut meta = metadata("variation", spec, config);
    meta.grids.insert(pname.into(), *grid);
    meta.grids.insert("theta".into(), *theta);
    let mut table = SweepTable::new(meta)
        .column(pname, punit)
        .column("theta", "rad")
        .mc_column("delta_eC", "1")
        .column("lower", "1")
        .column("upper", "1")
        .column("gap_lower", "1")
        .column("gap_upper", "1")
        .column("global_impurity", "1");
    let params = grid.points();
    let thetas = theta.points();
    let tables: Vec<TwoCopyTable> = params
        .par_iter()
        .map(|&x| {
            let ch = spec.at(x)?;
            two_qubit(&ch, "variation")?;
            Ok(TwoCopyTable::new(&ch)?)
        })
        .collect::<CliResult<_>>()?;
    let channels: Vec<KrausChannel> = params.iter().map(|&x| spec.at(x)).collect::<CliResult<_>>()?;
    let n = config.samples;
    let rootstream = root(config);
    let rows: Vec<Vec<f64>> = (0..params.len() * thetas.len())
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / thetas.len(), k % thetas.len());
            let b = orbit_bounds(&tables[i], thetas[j])?;
            let est = delta_ec_mc(&channels[i], thetas[j], n, &rootstream.child(k as u64))?;
            Ok(vec![
                params[i],
                thetas[j],
                est.mean,
                est.stderr,
                b.lower,
                b.upper,
                est.mean - b.lower,
                b.upper - est.mean,
                b.global_impurity,
            ])
        })
        .collect::<CliResult<_>>()?;
    rows.into_iter().for_each(|r| table.push_row(r));
    Ok(table)
}

/// Validation report and analytic summary of one channel.
#[derive(Clone, Debug, Serialize)]
pub struct ChannelInspection {
    pub channel: String,
    pub parameter: Option<f64>,
    pub validation: ValidationReport,
    pub kraus_rank_bound: usize,
    pub f_avg: f64,
    pub f_prod: f64,
    pub chi_f: f64,
}

pub fn inspect_channel(spec: &ChannelSpec, x: f64) -> CliResult<(ChannelInspection, KrausChannel)> {
    let ch = spec.at(x)?;
    let inspection = ChannelInspection {
        channel: spec.to_string(),
        parameter: spec.is_parametric().then_some(x),
        validation: ch.validate(),
        kraus_rank_bound: ch.kraus().len(),
        f_avg: favg_analytic(&ch),
        f_prod: fprod_analytic(&ch),
        chi_f: chi_f(&ch),
    };
    Ok((inspection, ch))
}
