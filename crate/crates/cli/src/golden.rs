//! The rank-two example: pentagon from mesh equations, checked line by line
//! against values worked out by hand.

use std::collections::BTreeSet;

use fanforge::arquiver::{
    abhy_functionals, abhy_polytope, knit_ar_quiver, mesh_equations, ones, DynkinQuiver, DynkinType,
};
use fanforge::clusterfan::{enumerate_fan, Seed};
use fanforge::polyhedra::{fan_eq, normal_fan, vertices};
use fanforge::{ExactField, Rat};
use num_traits::{One, Signed, Zero};

use crate::CliError;

const MESHES: [&str; 3] = [
    "q13 + q24 = q14 + c24",
    "q14 + q25 = q24 + c25",
    "q24 + q35 = q25 + c35",
];
const ELIMINATED: [&str; 3] = [
    "q13 = c24 + c25 - q25",
    "q14 = c25 + c35 - q35",
    "q24 = c35 + q25 - q35",
];
/// `c = (1,1,1)`, with `x = q25`, `y = q35`.
const INEQUALITIES: [&str; 5] = ["x <= 2", "y <= 2", "-x + y <= 1", "-x <= 0", "-y <= 0"];
const VERTICES: [(i64, i64); 5] = [(0, 0), (2, 0), (2, 2), (1, 2), (0, 1)];

fn render_row(row: &[Rat], bound: &Rat) -> String {
    let mut out = String::new();
    for (c, v) in row.iter().zip(["x", "y"]) {
        if c.is_zero() {
            continue;
        }
        let mag = if c.abs().is_one() {
            String::new()
        } else {
            c.abs().to_string()
        };
        match (out.is_empty(), c.is_negative()) {
            (true, false) => out.push_str(&format!("{mag}{v}")),
            (true, true) => out.push_str(&format!("-{mag}{v}")),
            (false, false) => out.push_str(&format!(" + {mag}{v}")),
            (false, true) => out.push_str(&format!(" - {mag}{v}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    format!("{out} <= {bound}")
}

fn section(name: &str, got: &[String], want: &[String], mismatches: &mut Vec<String>) {
    println!("{name}");
    for line in got {
        println!("  {line}");
    }
    if got != want {
        mismatches.push(format!(
            "{name}: got [{}], expected [{}]",
            got.join("; "),
            want.join("; ")
        ));
    }
}

pub fn paper_a2() -> Result<(), CliError> {
    let quiver = DynkinQuiver::linear(DynkinType::A, 2)?;
    let ar = knit_ar_quiver(&quiver)?;
    let owned = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let mut mismatches = Vec::new();

    let proj: Vec<&str> = ar
        .projection_vertices()
        .iter()
        .map(|&i| ar.vertices()[i].name.as_str())
        .collect();
    println!("A2, linear orientation: x = {}, y = {}", proj[0], proj[1]);

    let meshes: Vec<String> = mesh_equations(&ar)
        .iter()
        .map(|m| ar.render_mesh(m))
        .collect();
    section("mesh equations", &meshes, &owned(&MESHES), &mut mismatches);

    let funcs = abhy_functionals(&ar)?;
    let eliminated: Vec<String> = (0..ar.vertices().len())
        .filter(|i| !ar.projection_vertices().contains(i))
        .map(|i| ar.render_functional(i, &funcs[i]))
        .collect();
    section(
        "eliminated",
        &eliminated,
        &owned(&ELIMINATED),
        &mut mismatches,
    );

    let c = ones(ar.meshes().len());
    let poly = abhy_polytope(&ar, &c)?;
    let ineqs: Vec<String> = poly
        .ineq_matrix()
        .rows()
        .zip(poly.bounds())
        .map(|(r, b)| render_row(r, b))
        .collect();
    section(
        "inequalities (c = 1,1,1)",
        &ineqs,
        &owned(&INEQUALITIES),
        &mut mismatches,
    );

    let v = vertices(&poly)?;
    let got: Vec<String> = v
        .vertices()
        .iter()
        .map(|p| format!("({},{})", p[0].to_pq_short(), p[1].to_pq_short()))
        .collect();
    let want: BTreeSet<Vec<Rat>> = VERTICES
        .iter()
        .map(|&(x, y)| vec![Rat::from_int(x), Rat::from_int(y)])
        .collect();
    println!("vertices");
    for line in &got {
        println!("  {line}");
    }
    let have: BTreeSet<Vec<Rat>> = v.vertices().iter().cloned().collect();
    if have != want {
        mismatches.push(format!("vertices: got [{}]", got.join("; ")));
    }

    let (fan, _) = enumerate_fan(&Seed::new(quiver.exchange_matrix())?)?;
    if fan_eq(&normal_fan(&v)?, &fan) {
        println!("normal fan equals the g-vector fan");
    } else {
        mismatches.push("normal fan differs from the g-vector fan".into());
    }

    if mismatches.is_empty() {
        println!("OK");
        Ok(())
    } else {
        Err(CliError::Failed(mismatches.join(" | ")))
    }
}

/// `p/q`, or `p` for integers.
trait ShortRational {
    fn to_pq_short(&self) -> String;
}

impl ShortRational for Rat {
    fn to_pq_short(&self) -> String {
        if self.is_integer() {
            self.to_integer().to_string()
        } else {
            self.to_pq()
        }
    }
}
