use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;
use std::path::Path;

use fanforge::arquiver::{abhy_polytope, knit_ar_quiver, ones, DynkinQuiver, DynkinType};
use fanforge::clusterfan::{
    enumerate_fan_with_budget, enumerate_with_triangulation, ExchangeGraph, DEFAULT_BUDGET,
};
use fanforge::io::{
    exchange_dot, fan_from_json, fan_to_json, parse_roff, parse_seed_input, type_cone_from_json,
    type_cone_to_json, write_roff, SeedInput,
};
use fanforge::polyhedra::{fan_eq, normal_fan, p_h, vertices, Fan, VPolytope};
use fanforge::scalar::parse_rational;
use fanforge::typecone::{dependencies, qc_polytope_from_k, type_cone};
use fanforge::Rat;

use crate::args::{Cli, Command, DynkinArgs};
use crate::{golden, CliError};

type Result<T> = std::result::Result<T, CliError>;

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Fan {
            dynkin,
            seed,
            output,
            dot,
        } => {
            let (fan, graph) = build_fan(dynkin, seed.as_deref())?;
            if let Some(path) = dot {
                let deps = dependencies(&fan)?;
                std::fs::write(path, exchange_dot(&graph, Some(&deps)))?;
            }
            emit(output.as_deref(), &(fan_to_json(&fan) + "\n"))
        }
        Command::Typecone {
            fan,
            report,
            output,
        } => {
            let fan = read_fan(fan.as_deref())?;
            let tc = type_cone(&fan)?;
            let json = type_cone_to_json(&tc.to_json()) + "\n";
            if !report {
                return emit(output.as_deref(), &json);
            }
            if let Some(path) = output {
                std::fs::write(path, &json)?;
            }
            let uerp = tc.uerp(&fan);
            println!(
                "facets={} expected={} uerp={} simplicial={} weak_uerp={} fan_valid={}",
                tc.facets.len(),
                tc.expected_facets(),
                uerp.holds,
                tc.is_simplicial(),
                uerp.weak_holds,
                fan.check(cli.rng_seed).is_valid()
            );
            Ok(())
        }
        Command::Realize {
            fan,
            typecone,
            c,
            h,
            output,
        } => {
            let fan = read_fan(Some(fan))?;
            let tc = type_cone_from_json(&read_input(Some(typecone))?)?;
            if tc.n != fan.n_rays() {
                return Err(CliError::Input(format!(
                    "type cone is over {} rays, the fan has {}",
                    tc.n,
                    fan.n_rays()
                )));
            }
            let poly = match h {
                Some(h) => p_h(&fan, &parse_list(h, "h")?)?,
                None => {
                    let c = match c {
                        Some(c) => parse_list(c, "c")?,
                        None => ones(tc.k.len()),
                    };
                    qc_polytope_from_k(&fan, &tc.k, &c)?.polytope
                }
            };
            emit(output.as_deref(), &write_roff(&vertices(&poly)?)?)
        }
        Command::Abhy {
            dynkin,
            c,
            ar,
            output,
        } => {
            let q = quiver(dynkin)?;
            let quiver = knit_ar_quiver(&q)?;
            if let Some(path) = ar {
                std::fs::write(path, serde_json::to_string(&quiver.to_json())? + "\n")?;
            }
            let c = match c {
                Some(c) => parse_list(c, "c")?,
                None => ones(quiver.meshes().len()),
            };
            let poly = abhy_polytope(&quiver, &c)?;
            emit(output.as_deref(), &write_roff(&vertices(&poly)?)?)
        }
        Command::Verify { fan, polytope } => {
            let fan = read_fan(Some(fan))?;
            let roff = parse_roff(&read_input(Some(polytope))?)?;
            verify(&fan, &roff)?;
            println!("OK");
            Ok(())
        }
        Command::Graph { fan, output } => {
            let fan = read_fan(fan.as_deref())?;
            let deps = dependencies(&fan)?;
            emit(
                output.as_deref(),
                &exchange_dot(&ExchangeGraph::from_fan(&fan), Some(&deps)),
            )
        }
        Command::PaperA2 => golden::paper_a2(),
    }
}

fn read_input(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) => {
            std::fs::read_to_string(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))
        }
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn emit(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn read_fan(path: Option<&Path>) -> Result<Fan> {
    Ok(fan_from_json(&read_input(path)?)?)
}

fn parse_list(s: &str, what: &str) -> Result<Vec<Rat>> {
    s.split(',')
        .map(|t| {
            parse_rational(t)
                .ok_or_else(|| CliError::Input(format!("bad rational `{}` in --{what}", t.trim())))
        })
        .collect()
}

fn budget() -> Result<usize> {
    match std::env::var("FANFORGE_BUDGET") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("FANFORGE_BUDGET=`{v}` is not a count"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn quiver(d: &DynkinArgs) -> Result<DynkinQuiver> {
    let (Some(kind), Some(rank)) = (&d.kind, d.rank) else {
        return Err(CliError::Input("--type and --rank are required".into()));
    };
    let kind: DynkinType = kind.parse()?;
    Ok(match &d.orientation {
        Some(o) => DynkinQuiver::parse_orientation(kind, rank, o)?,
        None => DynkinQuiver::linear(kind, rank)?,
    })
}

fn check_rank(d: &DynkinArgs, rank: usize) -> Result<()> {
    match d.rank {
        Some(r) if r != rank => Err(CliError::Input(format!(
            "--rank {r} but the seed has rank {rank}"
        ))),
        _ => Ok(()),
    }
}

fn build_fan(d: &DynkinArgs, seed: Option<&Path>) -> Result<(Fan, ExchangeGraph)> {
    let Some(path) = seed else {
        let q = quiver(d)?;
        let s = fanforge::clusterfan::Seed::new(q.exchange_matrix())?;
        return Ok(enumerate_fan_with_budget(&s, budget()?)?);
    };
    match parse_seed_input(&read_input(Some(path))?)? {
        SeedInput::Matrix { seed, labels } => {
            check_rank(d, seed.rank())?;
            let (fan, graph) = enumerate_fan_with_budget(&seed, budget()?)?;
            if labels.is_empty() {
                return Ok((fan, graph));
            }
            // Name the initial g-vectors e_i after the given variables.
            let n = fan.dim();
            let names: Vec<String> = fan
                .rays()
                .iter()
                .zip(fan.labels())
                .map(|(r, l)| {
                    match (
                        r.iter().filter(|&&x| x != 0).count(),
                        r.iter().position(|&x| x == 1),
                    ) {
                        (1, Some(i)) if i < n => labels[i].clone(),
                        _ => l.clone(),
                    }
                })
                .collect();
            Ok((fan.with_labels(names), graph))
        }
        SeedInput::Triangulation(t) => {
            check_rank(d, t.rank())?;
            if d.kind
                .as_deref()
                .is_some_and(|k| !k.eq_ignore_ascii_case("A"))
            {
                return Err(CliError::Input("a triangulation seed is of type A".into()));
            }
            let tf = enumerate_with_triangulation(&t)?;
            Ok((tf.fan, tf.graph))
        }
    }
}

fn verify(fan: &Fan, roff: &fanforge::io::Roff) -> Result<()> {
    if let Some(v) = roff.vertices.iter().find(|v| v.len() != fan.dim()) {
        return Err(CliError::Input(format!(
            "polytope point of dimension {}, fan of dimension {}",
            v.len(),
            fan.dim()
        )));
    }
    let p = VPolytope::from_points(fan.dim(), roff.vertices.clone())?;
    if p.vertices().len() != roff.vertices.len() {
        return Err(CliError::Failed(format!(
            "{} of {} listed points are vertices",
            p.vertices().len(),
            roff.vertices.len()
        )));
    }
    if !p.is_full_dimensional() {
        return Err(CliError::Failed("polytope is not full-dimensional".into()));
    }
    let index: BTreeMap<&Vec<Rat>, usize> = roff
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    let computed: BTreeSet<Vec<usize>> = p
        .facets()?
        .iter()
        .map(|f| {
            let mut s: Vec<usize> = f
                .vertices
                .iter()
                .map(|&i| index[&p.vertices()[i]])
                .collect();
            s.sort_unstable();
            s
        })
        .collect();
    let listed: BTreeSet<Vec<usize>> = roff
        .facets
        .iter()
        .map(|f| {
            let mut s = f.clone();
            s.sort_unstable();
            s
        })
        .collect();
    if computed != listed {
        return Err(CliError::Failed(
            "listed facets differ from the convex hull".into(),
        ));
    }
    let nf = normal_fan(&p)?;
    if !fan_eq(&nf, fan) {
        return Err(CliError::Failed("normal fan differs from the fan".into()));
    }
    Ok(())
}
