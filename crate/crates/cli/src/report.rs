//! Report rendering: canonical JSON (sorted keys, rationals as `p/q`
//! strings, no floats) and human-readable text with decimal
//! approximations alongside the exact values.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Value};

use tugames::audit::{AuditReport, CellOutcome, ManipulationInstance, Target};
use tugames::game::{Coalition, Domain};
use tugames::manipulate::{ManipulationDiff, ManipulationResult};
use tugames::ratio::{self, Rational};
use tugames::rules::Allocation;

use crate::gamefile::{self, coalition_names, GameFile};

fn sorted(value: Vec<(&'static str, Value)>) -> Value {
    let map: BTreeMap<String, Value> =
        value.into_iter().map(|(k, v)| (k.to_owned(), v)).collect();
    Value::Object(map.into_iter().collect())
}

pub fn print_value(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn rational(value: &Rational) -> Value {
    Value::String(ratio::display(value))
}

fn payoffs_value(players: &[String], alloc: &Allocation) -> Value {
    let map: BTreeMap<String, Value> = players
        .iter()
        .zip(alloc.payoffs())
        .map(|(name, value)| (name.clone(), rational(value)))
        .collect();
    Value::Object(map.into_iter().collect())
}

fn domain_value(domain: Domain) -> Value {
    json!(match domain {
        Domain::Unrestricted => "unrestricted",
        Domain::Superadditive => "superadditive",
    })
}

fn target_value(players: &[String], target: Target) -> Value {
    match target {
        Target::Coalition(m) => json!({ "coalition": coalition_names(players, m) }),
        Target::Player(i) => json!({ "player": players[i] }),
    }
}

fn instance_value(players: &[String], inst: &ManipulationInstance) -> Value {
    sorted(vec![
        (
            "original",
            gamefile::to_value(&GameFile::from_game(players.to_vec(), inst.original().clone())),
        ),
        (
            "manipulated",
            gamefile::to_value(&GameFile::from_game(players.to_vec(), inst.manipulated().clone())),
        ),
        ("target", target_value(players, inst.target())),
    ])
}

// -- eval ---------------------------------------------------------------

pub fn eval_value(rule: &str, players: &[String], alloc: &Allocation) -> Value {
    sorted(vec![
        ("command", json!("eval")),
        ("rule", json!(rule)),
        ("players", json!(players)),
        ("payoffs", payoffs_value(players, alloc)),
        ("total", rational(&alloc.total())),
    ])
}

pub fn eval_text(rule: &str, players: &[String], alloc: &Allocation) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "rule: {rule}");
    let width = players.iter().map(|p| p.len()).max().unwrap_or(1);
    for (name, value) in players.iter().zip(alloc.payoffs()) {
        let _ = writeln!(
            out,
            "  {name:width$}  {}  ({:.6})",
            ratio::display(value),
            ratio::approx(value)
        );
    }
    let total = alloc.total();
    let _ = writeln!(out, "total: {} ({:.6})", ratio::display(&total), ratio::approx(&total));
    out
}

// -- audit ----------------------------------------------------------------

pub struct AuditRendering {
    pub value: Value,
    pub text: String,
    /// True iff some axiom the rule is expected to satisfy was violated.
    pub unexpected_violation: bool,
}

pub fn render_audit(reports: &[(u8, AuditReport)]) -> AuditRendering {
    let mut unexpected = false;
    let mut text = String::new();
    let mut report_values = Vec::new();
    for (n, report) in reports {
        let players = gamefile::default_players(*n);
        let _ = writeln!(
            text,
            "rule {} at n={n} (domain {:?}, seed {}, {} samples/axiom, lattice ±{}/{}):",
            report.rule,
            report.config.domain,
            report.config.seed,
            report.config.samples,
            report.config.radius,
            report.config.denom,
        );
        let mut cells = Vec::new();
        for cell in &report.cells {
            let expected = tugames::audit::expected_verdict(&report.rule, cell.axiom);
            let expectation = match expected {
                Some(true) => "satisfied",
                Some(false) => "violated",
                None => "unasserted",
            };
            match &cell.outcome {
                CellOutcome::NoViolationFound { samples } => {
                    let _ = writeln!(
                        text,
                        "  {:<5} no violation found in {samples} samples (expected: {expectation})",
                        cell.axiom.label(),
                    );
                    cells.push(sorted(vec![
                        ("axiom", json!(cell.axiom.label())),
                        ("expected", json!(expectation)),
                        ("outcome", json!("no-violation-found")),
                        ("samples", json!(samples)),
                    ]));
                }
                CellOutcome::Violated(violation) => {
                    let surprising = expected == Some(true);
                    unexpected |= surprising;
                    let _ = writeln!(
                        text,
                        "  {:<5} VIOLATED, gain {} (expected: {expectation}){}",
                        cell.axiom.label(),
                        ratio::display(&violation.gain),
                        if surprising { "  <-- unexpected" } else { "" },
                    );
                    if surprising {
                        let _ = write!(
                            text,
                            "{}",
                            witness_text(&players, &violation.witness, &violation.gain)
                        );
                    }
                    cells.push(sorted(vec![
                        ("axiom", json!(cell.axiom.label())),
                        ("expected", json!(expectation)),
                        ("outcome", json!("violated")),
                        ("gain", rational(&violation.gain)),
                        ("witness", instance_value(&players, &violation.witness)),
                    ]));
                }
            }
        }
        report_values.push(sorted(vec![
            ("rule", json!(report.rule.to_string())),
            ("player_count", json!(n)),
            ("domain", domain_value(report.config.domain)),
            ("seed", json!(report.config.seed)),
            ("samples", json!(report.config.samples)),
            ("radius", json!(report.config.radius)),
            ("denom", json!(report.config.denom)),
            ("cells", Value::Array(cells)),
        ]));
    }
    let value = sorted(vec![
        ("command", json!("audit")),
        ("reports", Value::Array(report_values)),
        ("unexpected_violation", json!(unexpected)),
    ]);
    AuditRendering { value, text, unexpected_violation: unexpected }
}

fn witness_text(players: &[String], inst: &ManipulationInstance, gain: &Rational) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "        witness (gain {}):", ratio::display(gain));
    let n = inst.original().player_count();
    for s in Coalition::all(n).skip(1) {
        let before = &inst.original().worths()[s.mask()];
        let after = &inst.manipulated().worths()[s.mask()];
        let marker = if before == after { " " } else { "*" };
        let _ = writeln!(
            out,
            "        {marker} v({}) = {} -> {}",
            coalition_names(players, s).join(","),
            ratio::display(before),
            ratio::display(after),
        );
    }
    out
}

// -- manipulate -----------------------------------------------------------

pub fn manipulate_value(
    players: &[String],
    result: &ManipulationResult,
    diff: Option<&ManipulationDiff>,
    witness: Option<&GameFile>,
) -> Value {
    let mut fields = vec![
        ("command", json!("manipulate")),
        ("mode", json!(result.mode.label())),
        ("coalition", json!(coalition_names(players, result.coalition))),
        ("base_group_payoff", rational(&result.base_group_payoff)),
        ("gain", rational(&result.gain)),
        ("gain_is_exact", json!(result.gain_is_exact)),
        ("candidates_evaluated", json!(result.trace)),
        ("witness", witness.map(gamefile::to_value).unwrap_or(Value::Null)),
    ];
    if let Some(diff) = diff {
        fields.push(("diff", diff_value(players, diff)));
    }
    sorted(fields)
}

fn changes_value(players: &[String], changes: &[tugames::manipulate::ValueChange]) -> Value {
    Value::Array(
        changes
            .iter()
            .map(|c| {
                sorted(vec![
                    ("coalition", json!(coalition_names(players, c.coalition))),
                    ("before", rational(&c.before)),
                    ("after", rational(&c.after)),
                ])
            })
            .collect(),
    )
}

fn diff_value(players: &[String], diff: &ManipulationDiff) -> Value {
    let deltas: BTreeMap<String, Value> = players
        .iter()
        .zip(&diff.payoff_deltas)
        .map(|(name, d)| (name.clone(), rational(d)))
        .collect();
    sorted(vec![
        ("worths", changes_value(players, &diff.worths)),
        ("dividends", changes_value(players, &diff.dividends)),
        ("payoff_deltas", Value::Object(deltas.into_iter().collect())),
    ])
}

pub fn manipulate_text(
    players: &[String],
    result: &ManipulationResult,
    diff: Option<&ManipulationDiff>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "mode {} for coalition {{{}}}: base group payoff {}",
        result.mode.label(),
        coalition_names(players, result.coalition).join(","),
        ratio::display(&result.base_group_payoff),
    );
    let _ = writeln!(
        out,
        "gain: {}{} ({} candidates evaluated)",
        ratio::display(&result.gain),
        if result.gain_is_exact { " (exact over the feasible set)" } else { "" },
        result.trace,
    );
    if let Some(diff) = diff {
        let _ = writeln!(out, "witness changes:");
        for c in &diff.worths {
            let _ = writeln!(
                out,
                "  v({}) = {} -> {}",
                coalition_names(players, c.coalition).join(","),
                ratio::display(&c.before),
                ratio::display(&c.after),
            );
        }
        let _ = writeln!(out, "payoff deltas:");
        for (name, d) in players.iter().zip(&diff.payoff_deltas) {
            let _ = writeln!(out, "  {name}: {}", ratio::display(d));
        }
    }
    out
}
