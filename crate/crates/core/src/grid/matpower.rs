//! Reader for MATPOWER-style case files (`mpc.bus = [...]` tables).

use std::collections::HashSet;

use super::{
    validate, Branch, BranchStatus, Bus, BusId, BusKind, CaseError, CostCurve, GenStatus,
    Generator, GridCase,
};

struct Table {
    line: usize,
    rows: Vec<(usize, Vec<f64>)>,
}

#[derive(Default)]
struct RawCase {
    name: Option<String>,
    base_mva: Option<f64>,
    bus: Option<Table>,
    gen: Option<Table>,
    branch: Option<Table>,
    gencost: Option<Table>,
    dcline: Option<Table>,
}

fn strip_comment(line: &str) -> &str {
    let mut in_str = false;
    for (i, c) in line.char_indices() {
        match c {
            '\'' => in_str = !in_str,
            '%' if !in_str => return &line[..i],
            _ => {}
        }
    }
    line
}

fn parse_number(tok: &str, line: usize) -> Result<f64, CaseError> {
    match tok {
        "Inf" | "inf" => Ok(f64::INFINITY),
        "-Inf" | "-inf" => Ok(f64::NEG_INFINITY),
        _ => tok.parse::<f64>().map_err(|_| CaseError::Parse {
            line,
            msg: format!("expected a number, found `{tok}`"),
        }),
    }
}

fn parse_rows(body: &[(usize, String)]) -> Result<Vec<(usize, Vec<f64>)>, CaseError> {
    let mut rows = Vec::new();
    for (line, text) in body {
        for chunk in text.split(';') {
            let vals = chunk
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| parse_number(t, *line))
                .collect::<Result<Vec<_>, _>>()?;
            if !vals.is_empty() {
                rows.push((*line, vals));
            }
        }
    }
    Ok(rows)
}

fn scan(text: &str) -> Result<RawCase, CaseError> {
    let mut raw = RawCase::default();
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l)))
        .collect();
    let mut i = 0;
    while i < lines.len() {
        let (lineno, line) = lines[i];
        let trimmed = line.trim();
        i += 1;
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("function") {
            if let Some((_, name)) = rest.split_once('=') {
                raw.name = Some(name.trim().trim_end_matches(';').to_string());
            }
            continue;
        }
        let Some(rest) = trimmed.strip_prefix("mpc.") else {
            return Err(CaseError::Parse {
                line: lineno,
                msg: format!("unexpected statement `{trimmed}`"),
            });
        };
        let Some((key, value)) = rest.split_once('=') else {
            return Err(CaseError::Parse {
                line: lineno,
                msg: "expected `mpc.<field> = <value>`".into(),
            });
        };
        let key = key.trim();
        let value = value.trim();

        if let Some(after) = value.strip_prefix('[') {
            // Collect the matrix body up to the closing bracket.
            let mut body = Vec::new();
            let mut current = after.to_string();
            let mut current_line = lineno;
            loop {
                if let Some(end) = current.find(']') {
                    body.push((current_line, current[..end].to_string()));
                    break;
                }
                body.push((current_line, current.clone()));
                if i >= lines.len() {
                    return Err(CaseError::Parse {
                        line: lineno,
                        msg: format!("unterminated table `{key}`"),
                    });
                }
                current_line = lines[i].0;
                current = lines[i].1.to_string();
                i += 1;
            }
            let table = Table {
                line: lineno,
                rows: parse_rows(&body)?,
            };
            match key {
                "bus" => raw.bus = Some(table),
                "gen" => raw.gen = Some(table),
                "branch" => raw.branch = Some(table),
                "gencost" => raw.gencost = Some(table),
                "dcline" => raw.dcline = Some(table),
                _ => {}
            }
        } else if value.starts_with('{') {
            // Cell arrays (bus names and the like) are skipped.
            let mut closed = value.contains('}');
            while !closed {
                if i >= lines.len() {
                    return Err(CaseError::Parse {
                        line: lineno,
                        msg: format!("unterminated cell array `{key}`"),
                    });
                }
                closed = lines[i].1.contains('}');
                i += 1;
            }
        } else {
            let scalar = value.trim_end_matches(';').trim();
            if key == "baseMVA" {
                raw.base_mva = Some(parse_number(scalar, lineno)?);
            }
        }
    }
    Ok(raw)
}

fn col(row: &[f64], idx: usize) -> f64 {
    row.get(idx).copied().unwrap_or(0.0)
}

fn require_cols(table: &Table, name: &str, min: usize) -> Result<(), CaseError> {
    for (line, row) in &table.rows {
        if row.len() < min {
            return Err(CaseError::Parse {
                line: *line,
                msg: format!(
                    "{name} row has {} columns, expected at least {min}",
                    row.len()
                ),
            });
        }
    }
    Ok(())
}

fn bus_id(value: f64, line: usize) -> Result<BusId, CaseError> {
    if value >= 1.0 && value.fract() == 0.0 && value <= u32::MAX as f64 {
        Ok(BusId(value as u32))
    } else {
        Err(CaseError::Parse {
            line,
            msg: format!("invalid bus number {value}"),
        })
    }
}

/// Parses MATPOWER case text into a validated [`GridCase`].
///
/// Only the columns carried by the data model are read. Polynomial costs of
/// degree at most two are accepted; piecewise-linear costs and DC lines are
/// rejected with [`CaseError::UnsupportedFeature`].
pub fn parse_case(text: &str) -> Result<GridCase, CaseError> {
    let raw = scan(text)?;
    let missing = |what: &str| CaseError::Parse {
        line: 0,
        msg: format!("missing `mpc.{what}`"),
    };

    let base_mva = raw.base_mva.ok_or_else(|| missing("baseMVA"))?;
    let bus_tab = raw.bus.ok_or_else(|| missing("bus"))?;
    let gen_tab = raw.gen.ok_or_else(|| missing("gen"))?;
    let branch_tab = raw.branch.ok_or_else(|| missing("branch"))?;

    if let Some(dc) = &raw.dcline {
        if !dc.rows.is_empty() {
            return Err(CaseError::UnsupportedFeature("DC lines".into()));
        }
    }

    require_cols(&bus_tab, "bus", 13)?;
    require_cols(&gen_tab, "gen", 10)?;
    require_cols(&branch_tab, "branch", 11)?;

    let mut buses = Vec::with_capacity(bus_tab.rows.len());
    let mut seen = HashSet::new();
    for (line, row) in &bus_tab.rows {
        let id = bus_id(row[0], *line)?;
        if !seen.insert(id) {
            return Err(CaseError::Parse {
                line: *line,
                msg: format!("duplicate bus {id}"),
            });
        }
        let kind = match row[1] as i64 {
            1 => BusKind::PQ,
            2 => BusKind::PV,
            3 => BusKind::Slack,
            4 => {
                return Err(CaseError::UnsupportedFeature(format!(
                    "isolated bus type on bus {id}"
                )))
            }
            other => {
                return Err(CaseError::Parse {
                    line: *line,
                    msg: format!("unknown bus type {other}"),
                })
            }
        };
        buses.push(Bus {
            id,
            kind,
            p_demand: row[2],
            q_demand: row[3],
            shunt_g: row[4],
            shunt_b: row[5],
            v_mag_init: row[7],
            v_ang_init: row[8],
            base_kv: row[9],
            v_max: row[11],
            v_min: row[12],
        });
    }

    let check_ref = |id: BusId, line: usize, what: &str| {
        if seen.contains(&id) {
            Ok(id)
        } else {
            Err(CaseError::Parse {
                line,
                msg: format!("{what} references unknown bus {id}"),
            })
        }
    };

    let mut generators = Vec::with_capacity(gen_tab.rows.len());
    for (n, (line, row)) in gen_tab.rows.iter().enumerate() {
        let bus = check_ref(bus_id(row[0], *line)?, *line, &format!("gen {}", n + 1))?;
        let p_max = row[8];
        let ramp_30 = col(row, 18);
        generators.push(Generator {
            bus,
            p_out: row[1],
            q_out: row[2],
            q_max: row[3],
            q_min: row[4],
            v_setpoint: row[5],
            status: if row[7] > 0.0 {
                GenStatus::On
            } else {
                GenStatus::Off
            },
            p_max,
            p_min: row[9],
            // Cases without ramp data get full output within one time unit.
            ramp_rate: if ramp_30 > 0.0 {
                ramp_30
            } else {
                p_max.max(1.0)
            },
        });
    }

    let mut branches = Vec::with_capacity(branch_tab.rows.len());
    for (n, (line, row)) in branch_tab.rows.iter().enumerate() {
        let what = format!("branch {}", n + 1);
        let from_bus = check_ref(bus_id(row[0], *line)?, *line, &what)?;
        let to_bus = check_ref(bus_id(row[1], *line)?, *line, &what)?;
        let tap = row[8];
        branches.push(Branch {
            from_bus,
            to_bus,
            r: row[2],
            x: row[3],
            b_charging: row[4],
            rate_mva: row[5],
            tap_ratio: if tap == 0.0 { 1.0 } else { tap },
            phase_shift: row[9],
            status: if row[10] > 0.0 {
                BranchStatus::InService
            } else {
                BranchStatus::Out
            },
            restore_time: 1.0,
        });
    }

    let mut cost_curves = Vec::new();
    if let Some(tab) = &raw.gencost {
        if tab.rows.len() < generators.len() {
            return Err(CaseError::Parse {
                line: tab.line,
                msg: format!(
                    "gencost has {} rows for {} generators",
                    tab.rows.len(),
                    generators.len()
                ),
            });
        }
        // Rows beyond the generator count hold reactive costs and are ignored.
        for (g, (line, row)) in tab.rows.iter().take(generators.len()).enumerate() {
            if row.len() < 4 {
                return Err(CaseError::Parse {
                    line: *line,
                    msg: "gencost row too short".into(),
                });
            }
            match row[0] as i64 {
                1 => {
                    return Err(CaseError::UnsupportedFeature(format!(
                        "piecewise-linear cost on gen {}",
                        g + 1
                    )))
                }
                2 => {}
                other => {
                    return Err(CaseError::Parse {
                        line: *line,
                        msg: format!("unknown cost model {other}"),
                    })
                }
            }
            let n = row[3] as usize;
            if n > 3 {
                return Err(CaseError::UnsupportedFeature(format!(
                    "polynomial cost of degree {} on gen {}",
                    n - 1,
                    g + 1
                )));
            }
            if row.len() < 4 + n {
                return Err(CaseError::Parse {
                    line: *line,
                    msg: "gencost row missing coefficients".into(),
                });
            }
            // Coefficients are stored highest order first.
            let mut c = [0.0; 3];
            for (k, value) in row[4..4 + n].iter().enumerate() {
                c[n - 1 - k] = *value;
            }
            cost_curves.push(CostCurve {
                generator_index: g,
                c2: c[2],
                c1: c[1],
                c0: c[0],
            });
        }
    }

    let case = GridCase {
        name: raw.name.unwrap_or_else(|| "case".into()),
        base_mva,
        buses,
        branches,
        generators,
        cost_curves,
    };
    let violations = validate(&case);
    if violations.is_empty() {
        Ok(case)
    } else {
        Err(CaseError::Invalid(violations))
    }
}
