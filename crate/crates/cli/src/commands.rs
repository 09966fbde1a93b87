use std::path::Path;

use permuton_lab::compressive::{enumerate_compressive, quotient};
use permuton_lab::params::{
    build_oscillating_param, estimate_by_subsampling, f_bullet, forcing_failure_experiment, FBulletParam,
    TesterConfig,
};
use permuton_lab::perm::{
    count_patterns, density, density_hom, density_mon, enumerate_patterns_capped, sample_uniform_statistics,
    CanonicalPatternList, PatternClass, Permutation,
};
use permuton_lab::permuton::{
    density_dsum, density_mc, density_mon_mc, density_mon_permuton, density_stepup, sample_permutation,
    Permuton,
};
use permuton_lab::rational::{format_rational, parse_rational, to_f64, Rational};
use permuton_lab::spectra::{
    borsuk_pair_search, certify_interior_point, density_vector_permutation, density_vector_permuton,
    determinant_rational, find_spanning_system, finite_difference_jacobian, jacobian_exact, jacobian_f64,
    max_relative_error, transform_vector, BorsukConfig, BorsukProblem, DensityKind, MonMatrix, SpanningSystem,
    TransformDirection,
};
use permuton_lab::Error;
use serde_json::{json, Value};

use crate::args::{Command, Kind, ParamSource, Source, Transform};

pub enum CliError {
    /// Bad input or arguments: exit status 1.
    Usage(String),
    /// A search or experiment did not succeed: exit status 2.
    Failure { message: String, payload: Option<Value> },
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::SearchFailed(_) | Error::Internal(_) => CliError::Failure {
                message: e.to_string(),
                payload: None,
            },
            other => CliError::Usage(other.to_string()),
        }
    }
}

pub struct Outcome {
    pub doc: Value,
    pub table: Option<&'static str>,
}

fn done(doc: Value) -> Result<Outcome, CliError> {
    Ok(Outcome { doc, table: None })
}

fn table(doc: Value, key: &'static str) -> Result<Outcome, CliError> {
    Ok(Outcome { doc, table: Some(key) })
}

pub struct Context {
    pub seed: u64,
    pub quiet: bool,
}

impl Context {
    fn progress(&self, msg: &str) {
        if !self.quiet {
            eprintln!("{msg}");
        }
    }
}

fn rational_json(r: &Rational) -> Value {
    json!({ "exact": format_rational(r), "value": to_f64(r) })
}

fn read_permuton(path: &Path) -> Result<Permuton, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("--permuton {}: {e}", path.display())))?;
    Permuton::from_json_str(&text).map_err(|e| CliError::Usage(format!("--permuton {}: {e}", path.display())))
}

fn read_json(flag: &str, path: &Path) -> Result<Value, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{flag} {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{flag} {}: {e}", path.display())))
}

fn parse_rationals(flag: &str, s: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',')
        .enumerate()
        .map(|(i, t)| {
            parse_rational(t.trim()).map_err(|e| CliError::Usage(format!("{flag}: entry {}: {e}", i + 1)))
        })
        .collect()
}

fn load_param(src: &ParamSource, ctx: &Context) -> Result<FBulletParam, CliError> {
    match &src.param {
        Some(path) => {
            let v = read_json("--param", path)?;
            FBulletParam::from_value(&v).map_err(|e| CliError::Usage(format!("--param {}: {e}", path.display())))
        }
        None => {
            ctx.progress(&format!("building an f-bullet parameter with {} terms", src.terms));
            Ok(build_oscillating_param(src.q_start, src.terms, ctx.seed)?)
        }
    }
}

fn source_permutation(source: &Source, n: usize, ctx: &Context) -> Result<Permutation, CliError> {
    match (&source.perm, &source.permuton) {
        (Some(p), _) => Ok(p.clone()),
        (None, Some(path)) => {
            let phi = read_permuton(path)?;
            ctx.progress(&format!("sampling a permutation of order {n}"));
            Ok(sample_permutation(&phi, n, ctx.seed))
        }
        (None, None) => Err(CliError::Usage("either --in or --permuton is required".into())),
    }
}

pub fn run(command: &Command, ctx: &Context) -> Result<Outcome, CliError> {
    match command {
        Command::Count { pattern, text } => {
            let c = count_patterns(pattern, text);
            done(json!({
                "pattern": pattern.to_string(),
                "text": text.to_string(),
                "occ": c.occ,
                "mon": c.mon,
                "hom": c.hom,
                "density": format_rational(&density(pattern, text)),
                "density_mon": format_rational(&density_mon(pattern, text)),
                "density_hom": format_rational(&density_hom(pattern, text)),
            }))
        }

        Command::Density { pattern, source, kind } => {
            let (value, target) = match (&source.perm, &source.permuton) {
                (Some(sigma), _) => {
                    let v = match kind {
                        Kind::Occ => density(pattern, sigma),
                        Kind::Mon => density_mon(pattern, sigma),
                        Kind::Hom => density_hom(pattern, sigma),
                    };
                    (v, json!({ "permutation": sigma.to_string() }))
                }
                (None, Some(path)) => {
                    let phi = read_permuton(path)?;
                    let v = match kind {
                        Kind::Occ => phi.density(pattern),
                        Kind::Mon => density_mon_permuton(pattern, &phi)?,
                        Kind::Hom => {
                            return Err(CliError::Usage(
                                "--kind hom: homomorphism densities are defined for permutations only".into(),
                            ))
                        }
                    };
                    (v, json!({ "permuton": phi.to_value() }))
                }
                (None, None) => return Err(CliError::Usage("either --in or --permuton is required".into())),
            };
            done(json!({
                "pattern": pattern.to_string(),
                "kind": DensityKind::from(*kind),
                "source": target,
                "mode": "exact",
                "density": rational_json(&value),
            }))
        }

        Command::Enumerate { q, class, cap } => {
            let class = PatternClass::from(*class);
            let patterns = enumerate_patterns_capped(*q, class, *cap)?;
            let mut by_order = vec![0usize; *q];
            for p in &patterns {
                by_order[p.len() - 1] += 1;
            }
            let rows: Vec<Value> = patterns
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    json!({
                        "index": i + 1,
                        "pattern": p.to_string(),
                        "order": p.len(),
                        "inversions": p.inversion_count(),
                    })
                })
                .collect();
            table(
                json!({
                    "q": q,
                    "class": class,
                    "count": patterns.len(),
                    "count_by_order": by_order,
                    "patterns": rows,
                }),
                "patterns",
            )
        }

        Command::Compress { tau } => {
            let rows = enumerate_compressive(tau)
                .iter()
                .map(|part| {
                    Ok(json!({
                        "blocks": part.as_lists(),
                        "shifts": part.shifts(),
                        "quotient": quotient(tau, part)?.to_string(),
                    }))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            table(
                json!({ "tau": tau.to_string(), "count": rows.len(), "partitions": rows }),
                "partitions",
            )
        }

        Command::Sample { permuton, n, count } => {
            if *n == 0 {
                return Err(CliError::Usage("--n must be positive".into()));
            }
            let phi = read_permuton(permuton)?;
            let rows: Vec<Value> = (0..*count)
                .map(|i| {
                    let seed = ctx.seed.wrapping_add(i as u64);
                    json!({ "seed": seed, "permutation": sample_permutation(&phi, *n, seed).to_string() })
                })
                .collect();
            table(json!({ "n": n, "permuton": phi.to_value(), "samples": rows }), "samples")
        }

        Command::StepupDensity { tau, sigma, weights } => {
            let w = parse_rationals("--weights", weights)?;
            let value = density_stepup(tau, sigma, &w)?;
            done(json!({
                "tau": tau.to_string(),
                "sigma": sigma.to_string(),
                "weights": w.iter().map(format_rational).collect::<Vec<_>>(),
                "density": rational_json(&value),
            }))
        }

        Command::DsumDensity { tau, permuton } => {
            let phi = read_permuton(permuton)?;
            let Permuton::DirectSum(d) = &phi else {
                return Err(CliError::Usage(format!(
                    "--permuton {}: expected a direct sum (\"type\":\"dsum\"), found {}",
                    permuton.display(),
                    phi.kind()
                )));
            };
            let value = density_dsum(tau, d.parts())?;
            done(json!({ "tau": tau.to_string(), "permuton": phi.to_value(), "density": rational_json(&value) }))
        }

        Command::McDensity { tau, permuton, samples, kind } => {
            let phi = read_permuton(permuton)?;
            ctx.progress(&format!("drawing {samples} samples"));
            let (est, exact) = match kind {
                Kind::Occ => (density_mc(tau, &phi, *samples, ctx.seed)?, phi.density(tau)),
                Kind::Mon => (density_mon_mc(tau, &phi, *samples, ctx.seed)?, density_mon_permuton(tau, &phi)?),
                Kind::Hom => {
                    return Err(CliError::Usage(
                        "--kind hom: homomorphism densities are defined for permutations only".into(),
                    ))
                }
            };
            let exact_f = to_f64(&exact);
            let z = if est.std_error > 0.0 { (est.estimate - exact_f).abs() / est.std_error } else { 0.0 };
            done(json!({
                "tau": tau.to_string(),
                "kind": DensityKind::from(*kind),
                "permuton": phi.to_value(),
                "samples": est.samples,
                "seed": ctx.seed,
                "mode": "monte-carlo",
                "estimate": est.estimate,
                "std_error": est.std_error,
                "exact": rational_json(&exact),
                "deviation_in_std_errors": z,
            }))
        }

        Command::Matrix { q } => {
            let patterns = CanonicalPatternList::new(*q)?;
            let m = MonMatrix::new(&patterns)?;
            let det = determinant_rational(&m.as_rational());
            done(json!({
                "q": q,
                "patterns": patterns.patterns().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "entries": m.entries(),
                "unit_upper_triangular": true,
                "determinant": format_rational(&det),
            }))
        }

        Command::Vector { q, source, kind, transform } => {
            let patterns = CanonicalPatternList::new(*q)?;
            let kind = DensityKind::from(*kind);
            let mut v = match (&source.perm, &source.permuton) {
                (Some(sigma), _) => density_vector_permutation(sigma, &patterns, kind),
                (None, Some(path)) => density_vector_permuton(&read_permuton(path)?, &patterns, kind)?,
                (None, None) => return Err(CliError::Usage("either --in or --permuton is required".into())),
            };
            if let Some(t) = transform {
                let m = MonMatrix::new(&patterns)?;
                let direction = match t {
                    Transform::OccToMon => TransformDirection::OccToMon,
                    Transform::MonToOcc => TransformDirection::MonToOcc,
                };
                v = transform_vector(&v, &m, direction)?;
            }
            let mut doc = v.to_value(&patterns);
            doc["mode"] = json!("exact");
            doc["values_f64"] = json!(v.to_f64());
            done(doc)
        }

        Command::Span { q, attempts, threshold } => {
            ctx.progress(&format!("searching up to {attempts} random systems"));
            let s = find_spanning_system(*q, ctx.seed, *attempts, *threshold)?;
            let mut doc = s.to_value();
            doc["seed"] = json!(ctx.seed);
            doc["threshold"] = json!(threshold);
            done(doc)
        }

        Command::Jacobian { q, x, system } => {
            let s = match system {
                Some(path) => SpanningSystem::from_value(&read_json("--system", path)?)
                    .map_err(|e| CliError::Usage(format!("--system {}: {e}", path.display())))?,
                None => find_spanning_system(*q, ctx.seed, 256, 0.0)?,
            };
            if s.q() != *q {
                return Err(CliError::Usage(format!("--system has q = {}, but --q is {q}", s.q())));
            }
            let r = s.r();
            let point = match x {
                Some(text) => parse_rationals("--x", text)?,
                None => vec![Rational::new(1.into(), (2 * r as i64).into()); r],
            };
            if point.len() != r {
                return Err(CliError::Usage(format!("--x needs {r} coordinates, got {}", point.len())));
            }
            let jac = jacobian_exact(&s, &point);
            let xf: Vec<f64> = point.iter().map(to_f64).collect();
            let fd = finite_difference_jacobian(&s, &xf, 1e-6);
            let err = max_relative_error(&jacobian_f64(&s, &xf).matrix, &fd);
            done(json!({
                "q": q,
                "x": point.iter().map(format_rational).collect::<Vec<_>>(),
                "matrix": jac.matrix.iter().map(|row| row.iter().map(format_rational).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "determinant": rational_json(&jac.determinant),
                "finite_difference_step": 1e-6,
                "finite_difference_max_relative_error": err,
                "system": s.to_value(),
            }))
        }

        Command::Certify { q, budget } => {
            ctx.progress(&format!("searching for a certified point with budget {budget}"));
            let w = certify_interior_point(*q, ctx.seed, *budget)?;
            let mut doc = w.to_value();
            doc["seed"] = json!(ctx.seed);
            done(doc)
        }

        Command::Borsuk { targets, k, n, starts, tolerance } => {
            let targets = match (targets, k) {
                (Some(t), _) => t.0.clone(),
                (None, Some(k)) => {
                    let list = CanonicalPatternList::new(n.saturating_sub(1).max(2))?;
                    let chosen: Vec<Permutation> =
                        list.patterns().iter().filter(|p| p.len() < *n).take(*k).cloned().collect();
                    if chosen.len() < *k {
                        return Err(CliError::Usage(format!(
                            "--k {k}: only {} canonical patterns of order below {n}",
                            chosen.len()
                        )));
                    }
                    chosen
                }
                (None, None) => return Err(CliError::Usage("either --targets or --k is required".into())),
            };
            let problem = BorsukProblem::with_default_family(targets, *n)?;
            let config = BorsukConfig {
                tolerance: *tolerance,
                starts: *starts,
                ..BorsukConfig::default()
            };
            ctx.progress(&format!("searching with up to {starts} starts"));
            let pair = borsuk_pair_search(&problem, ctx.seed, &config)?;
            let doc = json!({
                "k": problem.k(),
                "n": problem.n(),
                "targets": problem.targets().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "family": problem.family().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "config": config,
                "seed": ctx.seed,
                "pair": pair,
            });
            if pair.converged {
                done(doc)
            } else {
                Err(CliError::Failure {
                    message: format!("no pair within tolerance {tolerance:e}; best residual {:e}", pair.residual),
                    payload: Some(doc),
                })
            }
        }

        Command::Fbullet { param, perm } => {
            let p = load_param(param, ctx)?;
            let mut doc = json!({ "param": p.to_value() });
            if let Some(sigma) = perm {
                doc["permutation"] = json!(sigma.to_string());
                doc["f_bullet"] = rational_json(&f_bullet(&p, sigma));
            }
            done(doc)
        }

        Command::Tester { param, source, n, n0, epsilon, samples } => {
            let p = load_param(param, ctx)?;
            let sigma = source_permutation(source, *n, ctx)?;
            let cfg = TesterConfig {
                epsilon: *epsilon,
                n0: *n0,
                samples: *samples,
                seed: ctx.seed,
            };
            ctx.progress(&format!("drawing {samples} subsamples of order {n0}"));
            let est = estimate_by_subsampling(&p, &sigma, &cfg)?;
            done(json!({ "order": sigma.len(), "config": cfg, "result": est, "param": p.to_value() }))
        }

        Command::Forcing { param, index, orders, reps } => {
            let p = load_param(param, ctx)?;
            let k = index.unwrap_or(p.len());
            ctx.progress(&format!("sampling {reps} pairs at each of the orders {:?}", orders.0));
            let report = forcing_failure_experiment(&p, k, &orders.0, ctx.seed, *reps)?;
            table(
                json!({ "report": report, "orders": report.orders, "param": p.to_value() }),
                "orders",
            )
        }

        Command::Stats { n, samples } => {
            ctx.progress(&format!("sampling {samples} uniform permutations of order {n}"));
            let s = sample_uniform_statistics(*n, *samples, ctx.seed)?;
            let fi = s.fraction_indecomposable;
            let fs = s.fraction_simple;
            done(json!({
                "n": n,
                "samples": samples,
                "seed": ctx.seed,
                "fraction_indecomposable": fi,
                "fraction_indecomposable_std_error": s.standard_error(fi),
                "fraction_simple": fs,
                "fraction_simple_std_error": s.standard_error(fs),
            }))
        }
    }
}
