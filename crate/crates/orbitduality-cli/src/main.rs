use std::io::Write;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use orbitduality::cover::{abar_r_rank, d_map, gamma_group_rank, ms_lift};
use orbitduality::exceptional::{gamma_table, la_table, verify_tables, Group};
use orbitduality::group::{abar_rank, group_data, markable_parts, MarkedPartition};
use orbitduality::infchar::{gamma_la, gamma_rigid_cover};
use orbitduality::oracle::verify_min;
use orbitduality::orbit::{bvls_dual, induce, saturate, LeviShape, Orbit};
use orbitduality::partition::{Kind, Partition};
use orbitduality::sommers::{la_data, sat_marked, sommers_dual, LADatum, Route};
use orbitduality::suite::{run_all, run_criterion, CriterionReport, SuiteConfig};

#[derive(Parser)]
#[command(name = "orbitduality", version, about = "Partition combinatorics of nilpotent-orbit duality in classical types")]
struct Cli {
    /// Emit a single JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for verification sweeps (default: available processors).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// X-collapse of a partition.
    Collapse {
        #[arg(long)]
        kind: Kind,
        partition: Partition,
    },
    /// Transpose of a partition.
    Transpose { partition: Partition },
    /// Lusztig–Spaltenstein induction from a Levi, e.g. --levi "gl(2)+so(5)" --gl "[2]" "B:[3,1,1]".
    Induce {
        #[arg(long)]
        levi: String,
        /// One orbit per gl factor, in order.
        #[arg(long = "gl")]
        gl: Vec<Partition>,
        core: String,
    },
    /// Saturation from a Levi; a marked core "B:<[..]>[..]" saturates the marking too.
    Saturate {
        #[arg(long)]
        levi: String,
        #[arg(long = "gl")]
        gl: Vec<Partition>,
        core: String,
    },
    /// BVLS dual of an orbit.
    BvlsDual { orbit: Orbit },
    /// Sommers dual of a Lusztig–Achar datum.
    SommersDual {
        datum: LADatum,
        #[arg(long, default_value = "general")]
        route: Route,
    },
    /// Component-group data of an orbit.
    Group { orbit: Orbit },
    /// Markable parts and the rank of Ā.
    Markable { orbit: Orbit },
    /// Infinitesimal character γ(O∨, C̄), or of the rigid cover of an orbit with --rigid-cover.
    Gamma {
        input: String,
        #[arg(long)]
        rigid_cover: bool,
    },
    /// Rank of Γ along the saturation chain, with the Ā(O_R∨) rank for comparison.
    GammaGroup { datum: LADatum },
    /// McNinch–Sommers lift: factor algebras and orbits.
    MsLift { datum: LADatum },
    /// The duality map D: base orbit, cover degree and induction steps.
    DMap { datum: LADatum },
    /// Verification sweeps.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Print an exceptional table.
    Table {
        group: Group,
        /// Print the Γ-table instead of the special-distinguished table.
        #[arg(long)]
        gamma: bool,
    },
}

#[derive(Subcommand)]
enum Verify {
    /// Every acceptance criterion.
    All {
        #[arg(long, default_value_t = 5)]
        max_rank: usize,
    },
    /// A single acceptance criterion (1–8).
    Criterion {
        id: u8,
        #[arg(long, default_value_t = 5)]
        max_rank: usize,
    },
    /// Minimality certificates for every special distinguished datum of one algebra.
    Minimality {
        #[arg(long)]
        kind: Kind,
        #[arg(long)]
        rank: usize,
    },
    /// Exceptional table checks.
    Tables { group: Option<Group> },
}

/// Result of a command: the text form, the JSON form, and whether a verification failed.
struct Output {
    text: String,
    json: Value,
    failed: bool,
}

impl Output {
    fn ok(text: impl Into<String>, json: Value) -> Output {
        Output { text: text.into(), json, failed: false }
    }
}

fn levi_and_core(levi: &str, core: &str) -> Result<(LeviShape, Orbit)> {
    let core: Orbit = core.parse().with_context(|| format!("core orbit {core:?}"))?;
    let levi = LeviShape::parse(levi, Some(core.kind)).with_context(|| format!("Levi {levi:?}"))?;
    Ok((levi, core))
}

fn algebra_size(kind: Kind, rank: usize) -> Result<usize> {
    match kind {
        Kind::B => Ok(2 * rank + 1),
        Kind::C | Kind::D => Ok(2 * rank),
        Kind::A => bail!("verify minimality needs kind B, C or D"),
    }
}

fn suite_output(reports: Vec<CriterionReport>) -> Output {
    let failed = reports.iter().any(|r| !r.pass);
    let mut text = String::new();
    for r in &reports {
        text.push_str(&r.line());
        text.push('\n');
        for f in r.failures.iter().take(10) {
            text.push_str(&format!("    {f}\n"));
        }
    }
    Output { text: text.trim_end().to_string(), json: json!(reports), failed }
}

fn run(cli: Cli) -> Result<Output> {
    Ok(match cli.command {
        Command::Collapse { kind, partition } => {
            let c = partition.collapse(kind)?;
            Output::ok(c.to_string(), json!({"input": partition, "kind": kind, "collapse": c}))
        }
        Command::Transpose { partition } => {
            let t = partition.transpose();
            Output::ok(t.to_string(), json!({"input": partition, "transpose": t}))
        }
        Command::Induce { levi, gl, core } => {
            let (levi, core) = levi_and_core(&levi, &core)?;
            let ind = induce(&levi, &gl, &core)?;
            let mut text = format!("{}\njoin {} collapsed {} birational {}", ind.orbit, ind.join, ind.collapsed, ind.birational);
            if ind.decoration_warning {
                text.push_str("\nwarning: very even result, decoration not determined");
            }
            Output::ok(text, json!({"levi": levi.to_string(), "core": core, "result": ind}))
        }
        Command::Saturate { levi, gl, core } => {
            if core.contains('<') {
                let m = MarkedPartition::parse(&core, None)?;
                let levi = LeviShape::parse(&levi, Some(m.kind))?;
                let s = sat_marked(&levi, &gl, &m)?;
                Output::ok(s.to_string(), json!({"levi": levi.to_string(), "core": m.to_string(), "result": s.to_string()}))
            } else {
                let (levi, core) = levi_and_core(&levi, &core)?;
                let s = saturate(&levi, &gl, &core)?;
                Output::ok(s.to_string(), json!({"levi": levi.to_string(), "core": core, "result": s}))
            }
        }
        Command::BvlsDual { orbit } => {
            let d = bvls_dual(&orbit)?;
            Output::ok(d.to_string(), json!({"input": orbit, "dual": d}))
        }
        Command::SommersDual { datum, route } => {
            let s = sommers_dual(&datum, route)?;
            let mut text = s.orbit.to_string();
            if s.decoration_warning {
                text.push_str("\nwarning: very even result, decoration not determined");
            }
            let witness: Vec<Value> = s.witness.iter().map(|(k, p)| json!({"step": k, "partition": p})).collect();
            Output::ok(
                text,
                json!({"input": datum.to_string(), "route": format!("{route:?}").to_lowercase(), "result": s.orbit, "witness": witness}),
            )
        }
        Command::Group { orbit } => {
            let g = group_data(&orbit);
            let text = format!(
                "λ^ε {}\nA rank {}\nA^ad rank {}\nĀ rank {}\nυ̃ {}\nmarkable {}",
                g.lambda_eps, g.a_rank, g.a_ad_rank, g.abar_rank, g.upsilon_tilde, g.markable
            );
            Output::ok(text, json!({"orbit": orbit, "group": g}))
        }
        Command::Markable { orbit } => {
            let m = markable_parts(orbit.kind, &orbit.partition);
            let r = abar_rank(orbit.kind, &orbit.partition);
            Output::ok(format!("{m}\nĀ rank {r}"), json!({"orbit": orbit, "markable": m, "abar_rank": r}))
        }
        Command::Gamma { input, rigid_cover } => {
            if rigid_cover {
                let o: Orbit = input.parse()?;
                let g = gamma_rigid_cover(&o)?;
                Output::ok(g.to_string(), json!({"orbit": o, "gamma": g}))
            } else {
                let d: LADatum = input.parse()?;
                let g = gamma_la(&d)?;
                Output::ok(g.to_string(), json!({"datum": d.to_string(), "gamma": g}))
            }
        }
        Command::GammaGroup { datum } => {
            let (rank, steps) = gamma_group_rank(&datum)?;
            let r = abar_r_rank(&datum)?;
            let mut text = format!("Γ rank {rank}\nĀ(O_R∨) rank {r}");
            for s in &steps {
                text.push_str(&format!(
                    "\ngl({}): {} -> {} {}",
                    s.a,
                    s.before,
                    s.after,
                    if s.birational { "birational" } else { "not birational" }
                ));
            }
            Output::ok(text, json!({"datum": datum.to_string(), "gamma_rank": rank, "abar_r_rank": r, "steps": steps}))
        }
        Command::MsLift { datum } => {
            let m = ms_lift(&datum)?;
            Output::ok(m.to_string(), json!({"datum": datum.to_string(), "lift": m.to_string(), "abar_rank": m.abar_rank()}))
        }
        Command::DMap { datum } => {
            let d = d_map(&datum)?;
            let mut text = format!("{}-fold cover of {}\ncore dual {}", d.degree, d.cover.base, d.core_dual);
            for s in &d.steps {
                text.push_str(&format!(
                    "\ngl({}): {} -> {} {}",
                    s.a,
                    s.before,
                    s.after,
                    if s.birational { "birational" } else { "not birational" }
                ));
            }
            if let Some(w) = &d.warning {
                text.push_str(&format!("\nwarning: {w}"));
            }
            Output::ok(text, json!({"datum": datum.to_string(), "d_map": d}))
        }
        Command::Verify { what } => match what {
            Verify::All { max_rank } => {
                suite_output(run_all(&SuiteConfig { max_rank, ..SuiteConfig::default() }))
            }
            Verify::Criterion { id, max_rank } => {
                if !(1..=8).contains(&id) {
                    bail!("criterion must be between 1 and 8");
                }
                suite_output(vec![run_criterion(id, &SuiteConfig { max_rank, ..SuiteConfig::default() })])
            }
            Verify::Minimality { kind, rank } => {
                let n = algebra_size(kind, rank)?;
                let certs = la_data(kind, n)
                    .into_iter()
                    .filter(|d| d.is_special() && d.is_distinguished())
                    .map(|d| verify_min(&d))
                    .collect::<orbitduality::Result<Vec<_>>>()?;
                let failed = certs.iter().any(|c| !c.pass);
                let mut text = format!("{:<32} {:<36} {:>8} {:>8}  result", "datum", "candidate", "shell", "members");
                for c in &certs {
                    text.push_str(&format!(
                        "\n{:<32} {:<36} {:>8} {:>8}  {}",
                        c.datum,
                        c.candidate.to_string(),
                        c.shell_size,
                        c.members_found,
                        if c.pass { "PASS" } else { "FAIL" }
                    ));
                }
                let rows: Vec<Value> = certs
                    .iter()
                    .map(|c| {
                        json!({"datum": c.datum, "candidate": c.candidate, "shell_size": c.shell_size,
                               "members_found": c.members_found, "pass": c.pass})
                    })
                    .collect();
                Output { text, json: json!({"algebra": kind.algebra(n), "certificates": rows}), failed }
            }
            Verify::Tables { group } => {
                let groups: Vec<Group> = group.map_or(Group::ALL.to_vec(), |g| vec![g]);
                let reports = groups.into_iter().map(verify_tables).collect::<orbitduality::Result<Vec<_>>>()?;
                let failed = reports.iter().any(|r| !r.pass());
                let mut text = String::new();
                for r in &reports {
                    for c in &r.results {
                        text.push_str(&format!(
                            "{} {} [{}] {}: {}\n",
                            if c.pass { "PASS" } else { "FAIL" },
                            r.group,
                            c.check,
                            c.subject,
                            c.detail
                        ));
                    }
                }
                Output { text: text.trim_end().to_string(), json: json!(reports), failed }
            }
        },
        Command::Table { group, gamma } => {
            if gamma {
                let t = gamma_table(group)?;
                let mut text = t.title.clone();
                for r in &t.rows {
                    text.push_str(&format!(
                        "\n{} | {} | {} | {} | {},{},{} | {} | {}",
                        r.datum, r.orbit, r.levi, r.r_dual, r.abar_r, r.a_l, r.a, r.gamma, r.method
                    ));
                }
                Output::ok(text, json!(t))
            } else {
                let t = la_table(group)?;
                let mut text = t.title.clone();
                let opt = |o: &Option<String>| o.clone().unwrap_or_default();
                for r in &t.rows {
                    text.push_str(&format!(
                        "\n{} | {} | {} | {} | {} | {} | {}",
                        r.orbit_dual,
                        r.m_orbit,
                        opt(&r.d_s),
                        r.gamma_m,
                        opt(&r.gamma_la),
                        opt(&r.gamma_d),
                        opt(&r.r_o)
                    ));
                }
                Output::ok(text, json!(t))
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon_threads(j) {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    }
    let json_mode = cli.json;
    match run(cli) {
        Ok(out) => {
            let body = if json_mode {
                serde_json::to_string_pretty(&out.json).expect("JSON values serialize")
            } else {
                out.text
            };
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = writeln!(stdout, "{body}").and_then(|_| stdout.flush()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            }
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// The sweep pool reads its size from the environment on first use.
fn rayon_threads(j: usize) -> Result<()> {
    if j == 0 {
        return Err(anyhow!("--jobs must be positive"));
    }
    std::env::set_var("RAYON_NUM_THREADS", j.to_string());
    Ok(())
}
