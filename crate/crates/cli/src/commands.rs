use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;
use usflab_core::batch::sample_batch;
use usflab_core::format::{
    parse_forest, parse_network, write_any_network, write_forest, ForestRecord,
};
use usflab_core::generators;
use usflab_core::stats::{
    component_spine_log_conductance, components, ends_lower_bound, estimate_frequencies,
    forest_components, log_rational, ComponentPartition,
};
use usflab_core::verify::{run_suite, Suite};
use usflab_core::wilson::{sample_fusf_truncation, sample_wusf_truncation, wilson_ust};
use usflab_core::{AnyNetwork, BoundaryForest, Network, Rational, RngHandle};

use crate::{Command, Family, Mode};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("network has no wired vertex; mode {0} needs one")]
    MissingWiredVertex(&'static str),
    #[error("no fixture networks (*.net) in {0}")]
    FixtureMissing(PathBuf),
    #[error("forest {path} does not match the network: {reason}")]
    InconsistentForest { path: PathBuf, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Core(#[from] usflab_core::Error),
}

type Result<T> = std::result::Result<T, CliError>;

/// Caps the global thread pool at `USFLAB_THREADS` if it is set.
pub fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("USFLAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| {
            CliError::BadParams(format!(
                "USFLAB_THREADS must be a positive integer, got `{value}`"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::BadParams(e.to_string()))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(out: Option<&Path>, contents: &str) -> Result<()> {
    match out {
        Some(p) => write(p, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn header(command: &str, seed: u64, samples: Option<usize>) -> String {
    let mut h = format!(
        "# usflab {}\n# command: {command}\n# seed: {seed}\n",
        env!("CARGO_PKG_VERSION")
    );
    if let Some(n) = samples {
        let _ = writeln!(h, "# samples: {n}");
    }
    h
}

fn parse_rational(name: &str, value: Option<&str>) -> Result<Rational> {
    let value = value.ok_or_else(|| CliError::BadParams(format!("--{name} is required")))?;
    let bad = || {
        CliError::BadParams(format!(
            "--{name} must be an integer or num/den, got `{value}`"
        ))
    };
    let (num, den) = match value.split_once('/') {
        Some((n, d)) => (
            n.parse::<i64>().map_err(|_| bad())?,
            d.parse::<i64>().map_err(|_| bad())?,
        ),
        None => (value.parse::<i64>().map_err(|_| bad())?, 1),
    };
    if den == 0 {
        return Err(bad());
    }
    Ok(usflab_core::ratio(num, den))
}

fn required<T: Copy>(name: &str, value: Option<T>) -> Result<T> {
    value.ok_or_else(|| CliError::BadParams(format!("--{name} is required")))
}

/// Runs one subcommand. `Ok(false)` means a verification check failed.
pub fn run(command: Command, invocation: &str) -> Result<bool> {
    let invocation = match invocation.split_once(' ') {
        Some((_, rest)) => format!("usflab {rest}"),
        None => "usflab".to_string(),
    };
    match command {
        Command::Generate {
            family,
            d,
            side,
            n,
            k,
            k1,
            k2,
            radius,
            degree,
            wired,
            seed,
            out,
        } => {
            let network = match family {
                Family::Grid => {
                    generators::grid_box(required("d", d)?, required("side", side)?, wired)?
                }
                Family::Torus => AnyNetwork::Free(generators::torus(
                    required("d", d)?,
                    required("side", side)?,
                )?),
                Family::Canopy => AnyNetwork::Free(generators::canopy_network(
                    required("n", n)?,
                    parse_rational("k", k.as_deref())?,
                )?),
                Family::GluedCanopy => {
                    let (n, k1, k2) = (
                        required("n", n)?,
                        parse_rational("k1", k1.as_deref())?,
                        parse_rational("k2", k2.as_deref())?,
                    );
                    if wired {
                        AnyNetwork::Wired(generators::wired_glued_canopy(n, k1, k2)?.0)
                    } else {
                        AnyNetwork::Free(generators::glued_canopy(n, k1, k2)?)
                    }
                }
                Family::BoostedTree => {
                    AnyNetwork::Free(generators::boosted_tree(required("radius", radius)?, seed)?)
                }
                Family::TreeBall => AnyNetwork::Free(generators::regular_tree_ball(
                    degree,
                    required("radius", radius)?,
                )?),
            };
            let text = header(&invocation, seed, None) + &write_any_network(&network);
            emit(out.as_deref(), &text)?;
            Ok(true)
        }
        Command::Sample {
            network,
            mode,
            samples,
            seed,
            out,
        } => {
            if samples == 0 {
                return Err(CliError::BadParams("--samples must be positive".into()));
            }
            let net = parse_network(&read(&network)?)?;
            let records: Vec<usflab_core::Result<(ForestRecord, usize)>> = match mode {
                Mode::WusfTrunc => {
                    let wired = net
                        .wired()
                        .ok_or(CliError::MissingWiredVertex("wusf-trunc"))?;
                    sample_batch(samples, seed, |_, rng| {
                        let f = sample_wusf_truncation(wired, rng)?;
                        Ok((ForestRecord::from_forest(&f), forest_components(&f).count()))
                    })
                }
                Mode::FusfTrunc => {
                    let g = net.network();
                    sample_batch(samples, seed, |_, rng| {
                        Ok((ForestRecord::from_tree(&sample_fusf_truncation(g, rng)?), 1))
                    })
                }
                Mode::Ust => {
                    let g = net.network();
                    let order: Vec<usize> = (1..g.vertex_count()).collect();
                    sample_batch(samples, seed, |_, rng| {
                        Ok((ForestRecord::from_tree(&wilson_ust(g, 0, &order, rng)?), 1))
                    })
                }
            };
            fs::create_dir_all(&out).map_err(|source| CliError::Io {
                path: out.clone(),
                source,
            })?;
            let head = header(&invocation, seed, Some(samples));
            let mut manifest = head.clone();
            manifest.push_str("sample,file,edges,components\n");
            for (i, r) in records.into_iter().enumerate() {
                let (record, comps) = r?;
                let name = format!("sample_{i:06}.forest");
                write(&out.join(&name), &(head.clone() + &write_forest(&record)))?;
                let _ = writeln!(manifest, "{i},{name},{},{comps}", record.edges.len());
            }
            write(&out.join("manifest.csv"), &manifest)?;
            Ok(true)
        }
        Command::Verify {
            suite,
            fixtures,
            seed,
        } => {
            let suite: Suite = suite
                .parse()
                .map_err(|e: usflab_core::Error| CliError::BadParams(e.to_string()))?;
            let loaded = load_fixtures(&fixtures)?;
            let results = run_suite(suite, &loaded, seed);
            let mut report = header(&invocation, seed, None);
            report.push_str("status,suite,fixture,check,detail\n");
            for r in &results {
                let _ = writeln!(
                    report,
                    "{},{},{},{},\"{}\"",
                    if r.passed { "pass" } else { "fail" },
                    r.suite,
                    r.fixture,
                    r.check,
                    r.detail.replace('"', "'")
                );
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            let _ = writeln!(report, "# {} checks, {failed} failed", results.len());
            print!("{report}");
            Ok(failed == 0)
        }
        Command::Stats {
            network,
            forests,
            radius,
            steps,
            seed,
            out,
        } => {
            let net = parse_network(&read(&network)?)?;
            let mut csv = header(&invocation, seed, Some(forests.len()));
            csv.push_str("sample,component_id,size,frequency");
            for r in 0..=radius {
                let _ = write!(csv, ",ends_lb_r{r}");
            }
            csv.push_str(",mean_log_conductance\n");
            for (i, path) in forests.iter().enumerate() {
                let record = parse_forest(&read(path)?)?;
                let rows = component_rows(
                    &net,
                    &record,
                    radius,
                    steps,
                    RngHandle::substream(seed, i as u64),
                )
                .map_err(|e| CliError::InconsistentForest {
                    path: path.clone(),
                    reason: e.to_string(),
                })?;
                for row in rows {
                    let _ = writeln!(csv, "{i},{row}");
                }
            }
            emit(out.as_deref(), &csv)?;
            Ok(true)
        }
    }
}

fn load_fixtures(dir: &Path) -> Result<Vec<(String, AnyNetwork)>> {
    let entries = fs::read_dir(dir).map_err(|_| CliError::FixtureMissing(dir.to_path_buf()))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "net"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::FixtureMissing(dir.to_path_buf()));
    }
    paths
        .into_iter()
        .map(|p| {
            let name = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok((name, parse_network(&read(&p)?)?))
        })
        .collect()
}

fn component_rows(
    net: &AnyNetwork,
    record: &ForestRecord,
    radius: usize,
    steps: u64,
    mut rng: RngHandle,
) -> usflab_core::Result<Vec<String>> {
    let g = net.network();
    let (partition, forest, marks): (ComponentPartition, Option<BoundaryForest<'_>>, Vec<bool>) =
        match net.wired() {
            Some(w) => {
                let f = record.to_forest(w)?;
                let mut marks = vec![false; g.vertex_count()];
                for v in w.boundary_vertices() {
                    marks[v] = true;
                }
                (forest_components(&f), Some(f), marks)
            }
            None => {
                let t = record.to_tree(g)?;
                (
                    components(g, &t.edges()),
                    None,
                    vec![false; g.vertex_count()],
                )
            }
        };
    let start = partition.members[0][0];
    let freq = estimate_frequencies(g, &partition, start, steps, &mut rng)?.frequencies();
    let mut rows = Vec::new();
    for (c, members) in partition.members.iter().enumerate() {
        let mut row = format!("{c},{},{:?}", members.len(), freq[c]);
        for r in 0..=radius {
            let e = ends_lower_bound(g, &record.edges, members, &marks, members[0], r);
            let _ = write!(row, ",{e}");
        }
        let mlc = match &forest {
            Some(f) => component_spine_log_conductance(f, members),
            None => mean_edge_log_conductance(g, &record.edges),
        };
        let _ = write!(row, ",{mlc:?}");
        rows.push(row);
    }
    Ok(rows)
}

fn mean_edge_log_conductance(g: &Network, edges: &[usize]) -> f64 {
    if edges.is_empty() {
        return 0.0;
    }
    edges
        .iter()
        .map(|&e| log_rational(g.conductance(e)))
        .sum::<f64>()
        / edges.len() as f64
}
