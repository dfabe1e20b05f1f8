use std::fs;
use std::path::Path;

use center_algebra::io::{moment_to_json, parse_moment, parse_path, path_to_json};
use center_algebra::lie::{abel_gen_count, bch, free_lie_dim, lyndon_basis};
use center_algebra::operator::{gamma_report, psi};
use center_algebra::paths::{metric_d, metric_tail_bound};
use center_algebra::return_map::{is_center, ode_oracle_return_map, return_map_p};
use center_algebra::series::all_words;
use center_algebra::structure::{
    group_factorize, lie_center_test, lie_decompose, pl_center_element, s_ab,
};
use center_algebra::{DiagonalLieVector, Error, FreeSeries, LieSeries, PathSpec, Scalar, Word};
use serde_json::{json, Value};

use crate::report::Report;
use crate::{Command, LieCommand};

pub enum CliError {
    /// Malformed input; exit code 2.
    Parse(String),
    /// Valid input that violates a precondition; exit code 1.
    Failed(String),
}

type CliResult<T> = std::result::Result<T, CliError>;

fn lib_error(source: &str) -> impl Fn(Error) -> CliError + '_ {
    move |e| match e {
        Error::Parse { position, message } => {
            CliError::Parse(format!("{source}: at byte {position}: {message}"))
        }
        other => CliError::Failed(format!("{source}: {other}")),
    }
}

fn read(file: &Path) -> CliResult<String> {
    fs::read_to_string(file).map_err(|e| CliError::Failed(format!("{}: {e}", file.display())))
}

fn load_path(input: Option<&Path>) -> CliResult<(PathSpec, Value)> {
    let file = input.ok_or_else(|| CliError::Failed("--input FILE is required".into()))?;
    let name = file.display().to_string();
    let a = parse_path(&read(file)?).map_err(lib_error(&name))?;
    let echo = json!({"file": name, "path": path_to_json(&a)});
    Ok((a, echo))
}

fn parse_series(flag: &str, text: &str) -> CliResult<FreeSeries> {
    text.parse::<FreeSeries>().map_err(lib_error(flag))
}

fn parse_lie(flag: &str, text: &str) -> CliResult<LieSeries> {
    LieSeries::try_new(parse_series(flag, text)?).map_err(lib_error(flag))
}

/// Comma-separated items with byte positions relative to the whole argument.
fn split_list(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for piece in text.split(',') {
        let lead = piece.len() - piece.trim_start().len();
        out.push((start + lead, piece.trim()));
        start += piece.len() + 1;
    }
    out
}

fn parse_scalars(flag: &str, text: &str) -> CliResult<Vec<Scalar>> {
    split_list(text)
        .into_iter()
        .map(|(at, item)| {
            item.parse::<Scalar>()
                .map_err(|e| lib_error(flag)(e.offset(at)))
        })
        .collect()
}

fn parse_word(flag: &str, text: &str) -> CliResult<Word> {
    let letters = split_list(text)
        .into_iter()
        .map(|(at, item)| match item.parse::<u32>() {
            Ok(i) if i > 0 => Ok(i),
            _ => Err(CliError::Parse(format!(
                "{flag}: at byte {at}: expected a positive letter index, found {item:?}"
            ))),
        })
        .collect::<CliResult<Vec<u32>>>()?;
    Ok(Word::new(letters))
}

fn strings<T: ToString>(items: &[T]) -> Vec<String> {
    items.iter().map(ToString::to_string).collect()
}

pub fn run(command: &Command, order: usize, input: Option<&Path>) -> CliResult<Report> {
    if order == 0 {
        return Err(CliError::Failed("--order must be at least 1".into()));
    }
    let report = match command {
        Command::Integrals => {
            let (a, echo) = load_path(input)?;
            let e = a.monodromy(order);
            let integrals: Vec<Value> = all_words(order)
                .into_iter()
                .filter(|w| !w.is_empty())
                .map(|w| json!({"word": w.to_string(), "value": e.coeff(&w).to_string()}))
                .collect();
            Report::new("integrals", order, echo, json!({"integrals": integrals}))
        }
        Command::Monodromy => {
            let (a, echo) = load_path(input)?;
            let e = a.monodromy(order);
            Report::new(
                "monodromy",
                order,
                echo,
                json!({"series": e.to_string(), "terms": e.num_terms()}),
            )
        }
        Command::Center => {
            let (a, echo) = load_path(input)?;
            let rep = is_center(&a, order).map_err(lib_error("center"))?;
            let reached = rep.first_failing_degree.map_or(order, |d| d - 1);
            Report::new(
                "center",
                order,
                echo,
                json!({
                    "center_to_order": reached,
                    "verdict": rep.verdict,
                    "first_failing_degree": rep.first_failing_degree,
                    "return_map": rep.return_map.to_string(),
                }),
            )
        }
        Command::Universal => {
            let (a, echo) = load_path(input)?;
            let n = a.triviality_order(order);
            Report::new(
                "universal",
                order,
                echo,
                json!({"triviality_order": n, "universal": n > order}),
            )
        }
        Command::ReturnMap => {
            let (a, echo) = load_path(input)?;
            let rm = return_map_p(&a.monodromy(order)).map_err(lib_error("return-map"))?;
            Report::new(
                "return-map",
                order,
                echo,
                json!({"return_map": rm.to_string(), "coeffs": strings(rm.coeffs())}),
            )
        }
        Command::OracleCompare => {
            let (a, echo) = load_path(input)?;
            let algebraic = return_map_p(&a.monodromy(order)).map_err(lib_error("oracle-compare"))?;
            let ode = ode_oracle_return_map(&a, order);
            Report::new(
                "oracle-compare",
                order,
                echo,
                json!({
                    "equal": algebraic == ode,
                    "algebraic": algebraic.to_string(),
                    "ode": ode.to_string(),
                }),
            )
        }
        Command::Moments { moment } => {
            let (a, mut echo) = load_path(input)?;
            let name = moment.display().to_string();
            let m = parse_moment(&read(moment)?).map_err(lib_error(&name))?;
            echo["moment_file"] = json!(name);
            echo["moment"] = moment_to_json(&m);
            Report::new(
                "moments",
                order,
                echo,
                json!({"value": a.moment(&m).to_string(), "moment_order": m.order(), "degree": m.degree()}),
            )
        }
        Command::Metric { other } => {
            let (a, mut echo) = load_path(input)?;
            let (b, other_echo) = load_path(Some(other))?;
            echo["other"] = other_echo;
            let d = metric_d(&a.monodromy(order), &b.monodromy(order)).map_err(lib_error("metric"))?;
            Report::new(
                "metric",
                order,
                echo,
                json!({"distance": d.to_string(), "tail_bound": metric_tail_bound(order).to_string()}),
            )
        }
        Command::Lie { command } => run_lie(command, order)?,
        Command::Decompose { series } => {
            let (h, echo) = match series {
                Some(text) => (parse_lie("--series", text)?, json!({"series": text})),
                None => {
                    let (a, echo) = load_path(input)?;
                    let log = a.monodromy(order).log().map_err(lib_error("decompose"))?;
                    (LieSeries::try_new(log).map_err(lib_error("decompose"))?, echo)
                }
            };
            let (n_part, abel) = lie_decompose(&h);
            Report::new(
                "decompose",
                h.order(),
                echo,
                json!({
                    "n_part": n_part.body().to_string(),
                    "abel_part": abel.body().to_string(),
                    "n_part_in_center": lie_center_test(&n_part),
                }),
            )
        }
        Command::Factorize => {
            let (a, echo) = load_path(input)?;
            let (c, b) = group_factorize(&a.monodromy(order)).map_err(lib_error("factorize"))?;
            Report::new(
                "factorize",
                order,
                echo,
                json!({
                    "c": c.to_string(),
                    "b": b.to_string(),
                    "psi_c_is_identity": psi(&c).is_one(),
                }),
            )
        }
        Command::PlCenter { a, b } => {
            let va = parse_scalars("--a", a)?;
            let vb = parse_scalars("--b", b)?;
            let da = DiagonalLieVector::new(order, va).map_err(lib_error("--a"))?;
            let db = DiagonalLieVector::new(order, vb).map_err(lib_error("--b"))?;
            let s = s_ab(&da, &db).map_err(lib_error("pl-center"))?;
            let e = pl_center_element(&da, &db).map_err(lib_error("pl-center"))?;
            let rm = return_map_p(&e).map_err(lib_error("pl-center"))?;
            Report::new(
                "pl-center",
                order,
                json!({"a": strings(da.entries()), "b": strings(db.entries())}),
                json!({
                    "s_ab": strings(s.entries()),
                    "element": e.to_string(),
                    "psi_is_identity": psi(&e).is_one(),
                    "return_map_is_identity": rm.is_identity(),
                }),
            )
        }
        Command::Gamma { word } => {
            let w = parse_word("--word", word)?;
            let rep = gamma_report(&w).map_err(lib_error("gamma"))?;
            Report::new(
                "gamma",
                order,
                json!({"word": strings(w.letters())}),
                json!({
                    "rewriting": rep.rewriting.to_string(),
                    "recursion": rep.recursion.to_string(),
                    "printed": rep.printed.to_string(),
                    "printed_agrees": rep.printed_agrees(),
                }),
            )
        }
    };
    Ok(report)
}

fn run_lie(command: &LieCommand, order: usize) -> CliResult<Report> {
    let report = match command {
        LieCommand::Dims { n } => {
            let dim = free_lie_dim(*n).map_err(lib_error("lie dims"))?;
            Report::new("lie dims", order, json!({"n": n}), json!({"dim": dim}))
        }
        LieCommand::AbelCount { n } => {
            let count = abel_gen_count(*n).map_err(lib_error("lie abel-count"))?;
            Report::new("lie abel-count", order, json!({"n": n}), json!({"count": count}))
        }
        LieCommand::Lyndon { weight, max_index } => {
            let max = max_index.unwrap_or(*weight as u32);
            let words = lyndon_basis(max, *weight);
            Report::new(
                "lie lyndon",
                order,
                json!({"weight": weight, "max_index": max}),
                json!({"count": words.len(), "words": strings(&words)}),
            )
        }
        LieCommand::Bch { a, b } => {
            let la = parse_lie("--a", a)?;
            let lb = parse_lie("--b", b)?;
            let z = bch(&la, &lb).map_err(lib_error("lie bch"))?;
            Report::new(
                "lie bch",
                z.order(),
                json!({"a": a, "b": b}),
                json!({"bch": z.body().to_string()}),
            )
        }
    };
    Ok(report)
}
