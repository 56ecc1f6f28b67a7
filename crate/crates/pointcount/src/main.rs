use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::json;

use pointcount::asymptotics::{
    dirichlet_pole_probe, exponent_probe, fit_constant, local_density, local_factor_check,
    saturation_profile, well_roundedness,
};
use pointcount::enumeration::{
    count_on_small_diagonal, count_points, load_or_build, near_diagonal_fraction, HeightHistogram,
};
use pointcount::pgl2::{boundary_geometry, restriction_table, ModelConfig};
use pointcount::picard::{invariants, is_balanced};
use pointcount::report::{fingerprint, rational_string, SPEC_VERSION};
use pointcount::subgroups::{
    admissible_subgroups, alternating_5, bell, central_closure_comparison, goursat_closure,
    intermediate_subgroups, psl_2_7, special_linear_2_5, FiniteGroup, GroupTuple,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Workbench for counting rational points of bounded height on
/// compactified powers of PGL2 and classifying intermediate subgroups of
/// powers of small finite simple groups.
#[derive(Parser)]
#[command(name = "pointcount", version)]
struct Cli {
    /// TOML config file; command-line flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Directory for persistent caches
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Output file (stdout when omitted)
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct ModelArgs {
    /// Number of group factors r (the model has r - 1 moving points)
    #[arg(long)]
    r: Option<usize>,

    /// Comma-separated even degrees of the r - 1 factors, e.g. 4,4
    #[arg(long, value_delimiter = ',')]
    degrees: Option<Vec<u32>>,
}

#[derive(Args, Default)]
struct GridArgs {
    /// Histogram bound B
    #[arg(long)]
    bound: Option<u32>,

    /// Smallest threshold T of the grid
    #[arg(long)]
    t_min: Option<u128>,

    /// Largest threshold T of the grid
    #[arg(long)]
    t_max: Option<u128>,

    /// Geometric ratio between consecutive thresholds
    #[arg(long)]
    ratio: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Manin invariants (a, b) of the anticanonical model and all
    /// small-diagonal restrictions, with the balance verdict
    Invariants {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Build or extend the height histogram cache
    Histogram {
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Exact counts N(T) and small-diagonal counts over a T-grid, as CSV
    Count {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Leading-term fit and well-roundedness ratios over a T-grid
    Fit {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Well-roundedness dilation factors
        #[arg(long, value_delimiter = ',')]
        kappa: Option<Vec<f64>>,
    },
    /// p-adic density strata and local factor checks
    Local {
        /// Comma-separated primes
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        /// Stratification depth m
        #[arg(long)]
        depth: Option<u32>,
        /// Evaluation point s of the local factor
        #[arg(long)]
        s: Option<f64>,
    },
    /// Clamped-factor saturation fractions of an unbalanced model
    Saturation {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Intermediate-subgroup classification for a finite group
    Subgroups {
        /// Built-in group name: A5, PSL27, or SL25
        #[arg(long)]
        group: Option<String>,
        /// Generators in cycle notation, e.g. "(1 2 3 4 5); (3 4 5)"
        #[arg(long)]
        generators: Option<String>,
        /// Multiplication table file
        #[arg(long)]
        group_table: Option<PathBuf>,
        /// Power n of the group
        #[arg(long)]
        n: Option<usize>,
        /// Number of random Goursat closures to sample
        #[arg(long)]
        samples: Option<u64>,
        /// RNG seed (required when sampling)
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Aggregate JSON report: invariants, counts, fits, local densities,
    /// and the saturation or near-diagonal profile
    Report {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Near-diagonal sample size (balanced models)
        #[arg(long)]
        samples: Option<u64>,
        /// RNG seed (required when sampling)
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Optional values loadable from the TOML config; any flag overrides its
/// counterpart here.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    r: Option<usize>,
    degrees: Option<Vec<u32>>,
    bound: Option<u32>,
    // TOML integers are at most 64 bits; widened where consumed
    t_min: Option<u64>,
    t_max: Option<u64>,
    ratio: Option<f64>,
    primes: Option<Vec<u64>>,
    depth: Option<u32>,
    s: Option<f64>,
    kappa: Option<Vec<f64>>,
    group: Option<String>,
    generators: Option<String>,
    group_table: Option<PathBuf>,
    n: Option<usize>,
    samples: Option<u64>,
    seed: Option<u64>,
    cache_dir: Option<PathBuf>,
    output: Option<PathBuf>,
}

fn load_file_config(path: Option<&Path>) -> Result<FileConfig> {
    match path {
        None => Ok(FileConfig::default()),
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read config {}", path.display()))?;
            toml::from_str(&text).with_context(|| format!("cannot parse {}", path.display()))
        }
    }
}

fn model_config(model: &ModelArgs, file: &FileConfig) -> Result<ModelConfig> {
    let r = model.r.or(file.r);
    let degrees = model.degrees.clone().or_else(|| file.degrees.clone());
    match (r, degrees) {
        (Some(r), Some(degrees)) => Ok(ModelConfig::new(r, degrees)?),
        (Some(r), None) => Ok(ModelConfig::anticanonical(r)?),
        (None, Some(degrees)) => Ok(ModelConfig::new(degrees.len() + 1, degrees)?),
        (None, None) => bail!("model requires --r and/or --degrees (or config entries)"),
    }
}

fn t_grid(grid: &GridArgs, file: &FileConfig) -> Result<Vec<u128>> {
    let t_min = grid
        .t_min
        .or(file.t_min.map(u128::from))
        .context("missing --t-min")?;
    let t_max = grid
        .t_max
        .or(file.t_max.map(u128::from))
        .context("missing --t-max")?;
    let ratio = grid.ratio.or(file.ratio).unwrap_or(2.0);
    if t_min < 1 || t_max < t_min || ratio <= 1.0 {
        bail!("grid requires 1 <= t-min <= t-max and ratio > 1");
    }
    let mut out = Vec::new();
    let mut t = t_min as f64;
    while (t as u128) <= t_max {
        let rounded = t.round() as u128;
        if out.last() != Some(&rounded) {
            out.push(rounded);
        }
        t *= ratio;
    }
    Ok(out)
}

fn histogram(grid: &GridArgs, file: &FileConfig, cache_dir: &Path) -> Result<HeightHistogram> {
    let bound = grid.bound.or(file.bound).context("missing --bound")?;
    fs::create_dir_all(cache_dir)
        .with_context(|| format!("cannot create cache dir {}", cache_dir.display()))?;
    Ok(load_or_build(&cache_dir.join("histogram.txt"), bound)?)
}

fn cache_fingerprint(cache_dir: &Path) -> Option<String> {
    fs::read(cache_dir.join("histogram.txt"))
        .ok()
        .map(|bytes| format!("{:016x}", fingerprint(&bytes)))
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn invariants_block(cfg: &ModelConfig) -> Result<serde_json::Value> {
    let (geom, l) = boundary_geometry(cfg);
    let table = restriction_table(cfg);
    let whole = invariants(&geom, &l)?;
    let (balanced, witness) = is_balanced(&geom, &l, &table)?;
    let restrictions: Vec<serde_json::Value> = table
        .complete_pairs()?
        .into_iter()
        .map(|((i, j), restriction)| {
            let inv = restriction.invariants()?;
            Ok(json!({
                "i": i,
                "j": j,
                "a": rational_string(&inv.a),
                "b": inv.b,
            }))
        })
        .collect::<Result<_>>()?;
    Ok(json!({
        "a": rational_string(&whole.a),
        "b": whole.b,
        "balanced": balanced,
        "witness": witness,
        "restrictions": restrictions,
    }))
}

fn fit_block(hist: &HeightHistogram, cfg: &ModelConfig, grid: &[u128]) -> Result<serde_json::Value> {
    let curve = pointcount::enumeration::count_curve(hist, cfg, grid)?;
    let fit = exponent_probe(&curve)?;
    let (geom, l) = boundary_geometry(cfg);
    let predicted = invariants(&geom, &l)?;
    // thresholds are in T = B^4 units, where the predicted exponent is a
    let (c_hat, residuals) = fit_constant(&curve, predicted.a, predicted.b)?;
    Ok(json!({
        "a_hat": fit.a_hat,
        "b_hat": fit.b_hat,
        "c_hat": fit.c_hat,
        "residual_norm": fit.residual_norm,
        "constrained": {
            "a": rational_string(&predicted.a),
            "b": predicted.b,
            "c_hat": c_hat,
            "max_relative_residual": residuals.iter().fold(0.0f64, |m, r| m.max(r.abs())),
        },
    }))
}

fn load_group(
    group: Option<&str>,
    generators: Option<&str>,
    table: Option<&Path>,
) -> Result<(String, FiniteGroup)> {
    match (group, generators, table) {
        (Some(name), None, None) => {
            let g = match name.to_ascii_uppercase().as_str() {
                "A5" => alternating_5(),
                "PSL27" => psl_2_7(),
                "SL25" => special_linear_2_5(),
                other => bail!("unknown group `{other}` (use A5, PSL27, or SL25)"),
            };
            Ok((name.to_string(), g))
        }
        (None, Some(cycles), None) => Ok(("generators".into(), FiniteGroup::from_cycle_notation(cycles)?)),
        (None, None, Some(path)) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read group table {}", path.display()))?;
            Ok((path.display().to_string(), FiniteGroup::from_table_text(&text)?))
        }
        _ => bail!("give exactly one of --group, --generators, --group-table"),
    }
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    let file = load_file_config(cli.config.as_deref())?;
    let cache_dir = cli
        .cache_dir
        .clone()
        .or_else(|| file.cache_dir.clone())
        .unwrap_or_else(|| PathBuf::from("cache"));
    let output = cli.output.clone().or_else(|| file.output.clone());

    match &cli.command {
        Command::Invariants { model } => {
            let cfg = model_config(model, &file)?;
            let doc = json!({
                "spec_version": SPEC_VERSION,
                "model": { "r": cfg.r(), "degrees": cfg.degrees() },
                "invariants": invariants_block(&cfg)?,
            });
            emit(output.as_deref(), &format!("{:#}\n", doc))
        }
        Command::Histogram { grid } => {
            let hist = histogram(grid, &file, &cache_dir)?;
            let doc = json!({
                "spec_version": SPEC_VERSION,
                "bound": hist.bound(),
                "h1": hist.h(1),
                "classes": hist.cumulative(hist.bound() as u64).to_string(),
                "cache_fingerprint": cache_fingerprint(&cache_dir),
            });
            emit(output.as_deref(), &format!("{:#}\n", doc))
        }
        Command::Count { model, grid } => {
            let cfg = model_config(model, &file)?;
            let hist = histogram(grid, &file, &cache_dir)?;
            let thresholds = t_grid(grid, &file)?;
            let pairs: Vec<(usize, usize)> = (1..=cfg.r())
                .flat_map(|i| (i + 1..=cfg.r()).map(move |j| (i, j)))
                .collect();
            let mut csv = String::from("T,N");
            for &(i, j) in &pairs {
                csv.push_str(&format!(",N_diag_{i}_{j}"));
            }
            csv.push('\n');
            for &t in &thresholds {
                csv.push_str(&format!("{t},{}", count_points(&hist, &cfg, t)?));
                for &(i, j) in &pairs {
                    csv.push_str(&format!(",{}", count_on_small_diagonal(&hist, &cfg, t, i, j)?));
                }
                csv.push('\n');
            }
            emit(output.as_deref(), &csv)
        }
        Command::Fit { model, grid, kappa } => {
            let cfg = model_config(model, &file)?;
            let hist = histogram(grid, &file, &cache_dir)?;
            let thresholds = t_grid(grid, &file)?;
            let kappas = kappa
                .clone()
                .or_else(|| file.kappa.clone())
                .unwrap_or_else(|| vec![1.25, 1.10, 1.02]);
            let rounding: Vec<serde_json::Value> = kappas
                .iter()
                .map(|&k| {
                    let w = well_roundedness(&hist, &cfg, &thresholds, k)?;
                    Ok(json!({ "kappa": k, "sup_top_half": w.sup_top_half }))
                })
                .collect::<Result<_>>()?;
            let doc = json!({
                "spec_version": SPEC_VERSION,
                "model": { "r": cfg.r(), "degrees": cfg.degrees() },
                "grid": thresholds.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                "fit": fit_block(&hist, &cfg, &thresholds)?,
                "well_roundedness": rounding,
                "cache_fingerprint": cache_fingerprint(&cache_dir),
            });
            emit(output.as_deref(), &format!("{:#}\n", doc))
        }
        Command::Local { primes, depth, s } => {
            let primes = primes
                .clone()
                .or_else(|| file.primes.clone())
                .unwrap_or_else(|| vec![2, 3, 5, 7]);
            let depth = depth.or(file.depth).unwrap_or(3);
            let s = s.or(file.s).unwrap_or(2.5);
            let densities: Vec<serde_json::Value> = primes
                .iter()
                .map(|&p| {
                    let profile = local_density(p, depth)?;
                    let (factor, regularized) = local_factor_check(&profile, s)?;
                    Ok(json!({
                        "p": p,
                        "depth": depth,
                        "mu": profile.mu.iter().map(rational_string).collect::<Vec<_>>(),
                        "tail": rational_string(&profile.tail),
                        "s": s,
                        "factor": factor,
                        "regularized": regularized,
                    }))
                })
                .collect::<Result<_>>()?;
            let doc = json!({
                "spec_version": SPEC_VERSION,
                "local_densities": densities,
            });
            emit(output.as_deref(), &format!("{:#}\n", doc))
        }
        Command::Saturation { model, grid } => {
            let cfg = model_config(model, &file)?;
            let hist = histogram(grid, &file, &cache_dir)?;
            let thresholds = t_grid(grid, &file)?;
            let profile = saturation_profile(&hist, &cfg, &thresholds)?;
            let doc = json!({
                "spec_version": SPEC_VERSION,
                "model": { "r": cfg.r(), "degrees": cfg.degrees() },
                "saturation": profile,
                "cache_fingerprint": cache_fingerprint(&cache_dir),
            });
            emit(output.as_deref(), &format!("{:#}\n", doc))
        }
        Command::Subgroups {
            group,
            generators,
            group_table,
            n,
            samples,
            seed,
        } => {
            let (name, g) = load_group(
                group.as_deref().or(file.group.as_deref()),
                generators.as_deref().or(file.generators.as_deref()),
                group_table.as_deref().or(file.group_table.as_deref()),
            )?;
            let n = n.or(file.n).unwrap_or(2);
            let found = intermediate_subgroups(&g, n)?;
            let listing: Vec<serde_json::Value> = found
                .iter()
                .map(|m| {
                    json!({
                        "order": m.subgroup.order(),
                        "admissible": m.admissible,
                        "blocks": m.partition.block_count(),
                    })
                })
                .collect();
            let samples = samples.or(file.samples).unwrap_or(0);
            let sampled = if samples > 0 {
                let seed = seed.or(file.seed).context("--seed is required when sampling")?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut admissible = 0u64;
                for _ in 0..samples {
                    let coords: Vec<u16> = (0..n)
                        .map(|_| loop {
                            let x = rng.gen_range(0..g.order() as u16);
                            if !g.is_central(x) {
                                break x;
                            }
                        })
                        .collect();
                    let closure = goursat_closure(&g, &GroupTuple::new(&g, coords)?)?;
                    if closure.is_admissible(&g) {
                        admissible += 1;
                    }
                }
                Some(json!({ "seed": seed, "samples": samples, "admissible": admissible }))
            } else {
                None
            };
            let central = if g.center().len() > 1 {
                let x = (0..g.order() as u16).find(|&x| !g.is_central(x)).unwrap();
                let y = (0..g.order() as u16)
                    .find(|&y| !g.is_central(y) && !g.is_central(g.mul(x, g.inv(y))))
                    .unwrap();
                let pair = GroupTuple::new(&g, vec![x, y])?;
                Some(serde_json::to_value(central_closure_comparison(&g, &pair)?)?)
            } else {
                None
            };
            let doc = json!({
                "spec_version": SPEC_VERSION,
                "group": { "name": name, "order": g.order(), "center": g.center().len() },
                "n": n,
                "admissible_partitions": bell(n.min(8)),
                "partitions_enumerated": admissible_subgroups(n)?.len(),
                "intermediate_subgroups": listing,
                "random_closures": sampled,
                "central_comparison": central,
            });
            emit(output.as_deref(), &format!("{:#}\n", doc))
        }
        Command::Report {
            model,
            grid,
            samples,
            seed,
        } => {
            let cfg = model_config(model, &file)?;
            let hist = histogram(grid, &file, &cache_dir)?;
            let thresholds = t_grid(grid, &file)?;
            let inv = invariants_block(&cfg)?;
            let balanced = inv["balanced"].as_bool().unwrap_or(false);
            let curve: Vec<serde_json::Value> = thresholds
                .iter()
                .map(|&t| {
                    Ok(json!({ "t": t.to_string(), "n": count_points(&hist, &cfg, t)?.to_string() }))
                })
                .collect::<Result<_>>()?;
            let rounding: Vec<serde_json::Value> = [1.25, 1.10, 1.02]
                .iter()
                .map(|&k| {
                    let w = well_roundedness(&hist, &cfg, &thresholds, k)?;
                    Ok(json!({ "kappa": k, "sup_top_half": w.sup_top_half }))
                })
                .collect::<Result<_>>()?;
            let densities: Vec<serde_json::Value> = [2u64, 3, 5, 7]
                .iter()
                .map(|&p| {
                    let profile = local_density(p, 3)?;
                    let (factor, regularized) = local_factor_check(&profile, 2.5)?;
                    Ok(json!({
                        "p": p,
                        "mu0": rational_string(&profile.mu[0]),
                        "factor": factor,
                        "regularized": regularized,
                    }))
                })
                .collect::<Result<_>>()?;
            let pole = dirichlet_pole_probe(&hist, &[4.2, 4.5, 4.8])?;
            let locus = if balanced {
                let samples = samples.or(file.samples).unwrap_or(0);
                if samples > 0 {
                    let seed = seed.or(file.seed).context("--seed is required when sampling")?;
                    let top = *thresholds.last().unwrap();
                    let est = near_diagonal_fraction(&hist, &cfg, top, 2, samples, seed)?;
                    json!({ "near_diagonal": est })
                } else {
                    json!({ "near_diagonal": null })
                }
            } else {
                json!({ "saturation": saturation_profile(&hist, &cfg, &thresholds)? })
            };
            let doc = json!({
                "spec_version": SPEC_VERSION,
                "model": { "r": cfg.r(), "degrees": cfg.degrees() },
                "invariants": inv,
                "curve": curve,
                "fit": fit_block(&hist, &cfg, &thresholds)?,
                "well_roundedness": rounding,
                "local_densities": densities,
                "dirichlet_pole": pole.iter().map(|row| {
                    json!({
                        "s": row.s,
                        "compensated": row.compensated,
                        "residue_ratio": row.residue_ratio,
                        "tail_bound": row.tail_bound,
                    })
                }).collect::<Vec<_>>(),
                "locus": locus,
                "cache_fingerprint": cache_fingerprint(&cache_dir),
            });
            emit(output.as_deref(), &format!("{:#}\n", doc))
        }
    }
}

fn main() {
    if let Err(err) = run() {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
