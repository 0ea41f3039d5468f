//! Text, JSON, CSV and markdown rendering of command results.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use clap::ValueEnum;
use qtails_core::partition::{self, gen_partitions, Constraint, Partition, WeightRule};
use qtails_core::qfunc::{lambert, sigma2_series, sigma_series, sigma_star_series};
use qtails_core::registry::{RunParams, Status, Summary, VerificationReport};
use qtails_core::series::SeriesContext;
use qtails_core::{Error, Rat};
use serde::Serialize;
use serde_json::{json, Value};

use crate::{CoeffsArgs, Counter, Function};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// A result table with its JSON document and, optionally, a hand-laid text form.
pub struct Rendered {
    headers: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    json: Value,
    text: Option<String>,
}

impl Rendered {
    pub fn to(&self, format: Format) -> Result<String, String> {
        match format {
            Format::Json => json_text(&self.json),
            Format::Csv => csv_text(&self.headers, &self.rows),
            Format::Text => Ok(self.text.clone().unwrap_or_else(|| aligned(&self.headers, &self.rows))),
        }
    }
}

fn json_text<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string_pretty(v).map(|s| s + "\n").map_err(|e| e.to_string())
}

fn csv_text(headers: &[&str], rows: &[Vec<String>]) -> Result<String, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(headers).map_err(|e| e.to_string())?;
    for r in rows {
        w.write_record(r).map_err(|e| e.to_string())?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

fn aligned(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(headers.to_vec());
    for r in rows {
        out += &line(r.iter().map(String::as_str).collect());
    }
    out
}

fn caps_text(r: &VerificationReport) -> String {
    if r.caps.is_empty() {
        return "-".into();
    }
    r.caps.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
}

fn status_text(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Error => "error",
    }
}

pub fn summary(s: &Summary, format: Format) -> Result<String, String> {
    match format {
        Format::Json => json_text(s),
        Format::Csv => {
            let headers =
                ["id", "status", "order", "caps", "q_order", "monomial", "lhs", "rhs", "j", "form", "elapsed_ms", "message"];
            let rows: Vec<Vec<String>> = s
                .reports
                .iter()
                .map(|r| {
                    let m = r.first_mismatch.as_ref();
                    let field = |f: &dyn Fn(&qtails_core::registry::FirstMismatch) -> String| m.map(f).unwrap_or_default();
                    vec![
                        r.id.clone(),
                        status_text(r.status).into(),
                        r.order.to_string(),
                        caps_text(r),
                        field(&|m| m.q_order.to_string()),
                        field(&|m| m.monomial.clone()),
                        field(&|m| m.lhs.clone()),
                        field(&|m| m.rhs.clone()),
                        field(&|m| m.j.map(|j| j.to_string()).unwrap_or_default()),
                        field(&|m| m.form.clone().unwrap_or_default()),
                        r.elapsed_ms.to_string(),
                        r.message.clone().unwrap_or_default(),
                    ]
                })
                .collect();
            csv_text(&headers, &rows)
        }
        Format::Text => {
            let mut out = String::new();
            for r in &s.reports {
                let _ = writeln!(
                    out,
                    "{:<8} {:<5} order={} caps={} {}ms",
                    r.id,
                    status_text(r.status),
                    r.order,
                    caps_text(r),
                    r.elapsed_ms
                );
                if let Some(m) = &r.first_mismatch {
                    let j = m.j.map(|j| format!(" j={j}")).unwrap_or_default();
                    let form = m.form.as_deref().map(|f| format!(" ({f})")).unwrap_or_default();
                    let _ = writeln!(
                        out,
                        "    first mismatch at q^{} [{}]{j}: lhs {} rhs {}{form}",
                        m.q_order, m.monomial, m.lhs, m.rhs
                    );
                }
                if let Some(msg) = &r.message {
                    let _ = writeln!(out, "    {msg}");
                }
            }
            let _ = writeln!(
                out,
                "total {}: {} pass, {} fail, {} error in {}ms",
                s.total, s.pass, s.fail, s.error, s.elapsed_ms
            );
            Ok(out)
        }
    }
}

pub fn markdown(s: &Summary, p: &RunParams) -> String {
    let mut out = String::from("# Identity verification report\n\n");
    let _ = writeln!(
        out,
        "Order {}, j_max {}, z_cap {}, n_max {}. {} of {} entries pass ({} fail, {} error).\n",
        p.order,
        p.j_max,
        p.z_cap,
        p.n_max(),
        s.pass,
        s.total,
        s.fail,
        s.error
    );
    out += "| id | identity | status | order | caps | elapsed (ms) |\n";
    out += "|---|---|---|---|---|---|\n";
    for r in &s.reports {
        let _ = writeln!(
            out,
            "| {} | `{}` | {} | {} | {} | {} |",
            r.id,
            r.paper_ref.replace('|', "\\|"),
            status_text(r.status),
            r.order,
            caps_text(r),
            r.elapsed_ms
        );
    }
    let bad: Vec<&VerificationReport> = s.reports.iter().filter(|r| r.status != Status::Pass).collect();
    if !bad.is_empty() {
        out += "\n## Failures\n\n";
        for r in bad {
            match (&r.first_mismatch, &r.message) {
                (Some(m), _) => {
                    let _ = writeln!(
                        out,
                        "- {}: q^{} [{}], lhs {}, rhs {}",
                        r.id, m.q_order, m.monomial, m.lhs, m.rhs
                    );
                }
                (None, Some(msg)) => {
                    let _ = writeln!(out, "- {}: {msg}", r.id);
                }
                (None, None) => {}
            }
        }
    }
    out
}

fn function_name(f: Function) -> &'static str {
    match f {
        Function::Sigma => "sigma",
        Function::Sigma2 => "sigma2",
        Function::SigmaStar => "sigma_star",
        Function::Lambert => "lambert",
        Function::PartitionGf => "partition_gf",
    }
}

fn counter_name(c: Counter) -> &'static str {
    match c {
        Counter::P1 => "p1",
        Counter::P2 => "p2",
        Counter::TauE => "tau_e",
        Counter::TauO => "tau_o",
        Counter::SigmaWeight => "sigma_weight",
        Counter::Sigma2Weight => "sigma2_weight",
        Counter::AeAo => "ae_ao",
    }
}

fn counter_value(c: Counter, n: u32, j: usize) -> Result<i64, Error> {
    let needs_positive = !matches!(c, Counter::SigmaWeight | Counter::AeAo);
    if needs_positive && n == 0 {
        return Err(Error::Domain(format!("{} is defined for n >= 1", counter_name(c))));
    }
    Ok(match c {
        Counter::P1 => partition::p1_count(n)?,
        Counter::P2 => partition::p2_count(n)?,
        Counter::TauE => partition::tau_even(n) as i64,
        Counter::TauO => partition::tau_odd(n) as i64,
        Counter::SigmaWeight => partition::sigma_weight(n)?,
        Counter::Sigma2Weight => partition::sigma2_weight(n)?,
        Counter::AeAo => partition::distinct_bounded_diff(n, j),
    })
}

/// The objects a counter sums over, each with its weight.
fn counter_items(c: Counter, n: u32, j: usize) -> Result<Vec<(String, i64)>, Error> {
    let weighted = |con: Constraint, rule: WeightRule| -> Result<Vec<(String, i64)>, Error> {
        gen_partitions(n, &con).iter().map(|p| Ok((p.to_string(), rule.weight(p)?))).collect()
    };
    let divisors = |parity: u32| -> Vec<(String, i64)> {
        (1..=n).filter(|d| n % d == 0 && d % 2 == parity).map(|d| (d.to_string(), 1)).collect()
    };
    match c {
        Counter::P1 => weighted(Constraint::p1(), WeightRule::NegOnePowOddParts),
        Counter::P2 => weighted(Constraint::p2(), WeightRule::NegOnePowPartsMinusLargestMultiplicity),
        Counter::TauE => Ok(divisors(0)),
        Counter::TauO => Ok(divisors(1)),
        Counter::SigmaWeight if n == 0 => Ok(vec![(Partition::empty().to_string(), 1)]),
        Counter::SigmaWeight => weighted(Constraint::distinct(), WeightRule::RankParityEvenMinusOdd),
        Counter::Sigma2Weight => weighted(Constraint::gap(2), WeightRule::RankParityOddMinusEven),
        Counter::AeAo => {
            let con = Constraint { distinct: true, max_parts: Some(j), ..Default::default() };
            Ok(gen_partitions(n, &con)
                .iter()
                .map(|p| (p.to_string(), if p.len() % 2 == 0 { 1 } else { -1 }))
                .collect())
        }
    }
}

fn signed(w: i64) -> String {
    if w > 0 {
        format!("+{w}")
    } else {
        w.to_string()
    }
}

pub fn partition_counts(c: Counter, range: RangeInclusive<u32>, j: usize, list: bool) -> Result<Rendered, Error> {
    let name = counter_name(c);
    let label = if c == Counter::AeAo { format!("{name}(n, j={j})") } else { format!("{name}(n)") };
    let mut values = Vec::new();
    let mut rows = Vec::new();
    let mut text = String::new();
    for n in range {
        let value = counter_value(c, n, j)?;
        let mut entry = json!({ "n": n, "value": value });
        if c == Counter::AeAo {
            entry["j"] = json!(j);
        }
        let display = if c == Counter::AeAo { format!("{name}({n}, {j})") } else { format!("{name}({n})") };
        let _ = writeln!(text, "{display} = {value}");
        if list {
            let items = counter_items(c, n, j)?;
            let width = items.iter().map(|(s, _)| s.len()).max().unwrap_or(0);
            for (s, w) in &items {
                let _ = writeln!(text, "  {s:<width$}  {}", signed(*w));
                rows.push(vec![n.to_string(), s.clone(), w.to_string()]);
            }
            entry["items"] = items.iter().map(|(s, w)| json!({ "item": s, "weight": w })).collect();
        } else {
            rows.push(vec![n.to_string(), value.to_string()]);
        }
        values.push(entry);
    }
    let headers = if list { vec!["n", "item", "weight"] } else { vec!["n", "value"] };
    Ok(Rendered {
        headers,
        rows,
        json: json!({ "counter": name, "label": label, "values": values }),
        text: Some(text),
    })
}

pub fn coefficients(args: &CoeffsArgs) -> Result<Rendered, Error> {
    if args.order < 0 {
        return Err(Error::Window(format!("--order must be nonnegative, got {}", args.order)));
    }
    let ctx = SeriesContext::plain(args.order)?;
    let coeffs: Vec<Rat> = match args.function {
        Function::Sigma => sigma_series(&ctx)?.const_coeffs(args.order),
        Function::Sigma2 => sigma2_series(&ctx)?.const_coeffs(args.order),
        Function::SigmaStar => {
            let s = sigma_star_series(&ctx)?;
            (0..=args.order).map(|n| s.coeff_const(n)).collect()
        }
        Function::Lambert => {
            let s = lambert(args.a, args.b, &ctx)?;
            (0..=args.order).map(|n| s.coeff_const(n)).collect()
        }
        Function::PartitionGf => (0..=args.order as u32)
            .map(|n| match (args.count, n) {
                (Counter::SigmaWeight | Counter::AeAo, _) | (_, 1..) => counter_value(args.count, n, args.j),
                _ => Ok(0),
            }
            .map(Rat::from_int))
            .collect::<Result<_, _>>()?,
    };
    let rows: Vec<Vec<String>> = coeffs.iter().enumerate().map(|(n, c)| vec![n.to_string(), c.to_string()]).collect();
    let mut doc = json!({
        "function": function_name(args.function),
        "order": args.order,
        "coefficients": coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
    });
    match args.function {
        Function::Lambert => {
            doc["a"] = json!(args.a);
            doc["b"] = json!(args.b);
        }
        Function::PartitionGf => doc["count"] = json!(counter_name(args.count)),
        _ => {}
    }
    Ok(Rendered { headers: vec!["n", "coefficient"], rows, json: doc, text: None })
}
