//! Side-by-side data on matrix rings over GF(2^k): plain index, strong index
//! and unit exponent. Reported descriptively, nothing is asserted.

use torsion_clean::cli::{cmd_survey, survey_csv, Command, RunConfig};

fn main() {
    let specs: Vec<String> = ["M(1,GF(2))", "M(2,GF(2))", "M(3,GF(2))", "M(4,GF(2))", "M(2,GF(4))", "M(2,GF(8))", "M(3,GF(4))"]
        .map(String::from)
        .to_vec();
    let mut config = RunConfig::new(Command::Survey, specs.clone());
    config.timing = false;
    let rows = cmd_survey(&specs, &config);
    println!("{:<12} {:>6} {:>7} {:>8}  n = exp(U)?", "ring", "plain", "strong", "exp(U)");
    for r in &rows {
        let (p, s, e) = (r.plain_index.unwrap(), r.strong_index, r.unit_exponent.unwrap());
        let strong = s.map_or("none".into(), |s| s.to_string());
        println!("{:<12} {p:>6} {strong:>7} {e:>8}  {}", r.ring, s == Some(e));
    }
    println!("\n{}", survey_csv(&rows));
}
