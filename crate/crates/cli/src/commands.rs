use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use hydrofield::angular::{self, PhysicalConstants, Spin2pReport};
use hydrofield::energy::{self, EnergyJson, E1_EV};
use hydrofield::grid::{self, GridSpec, LobeReport, Plane};
use hydrofield::rational::{int, to_f64, to_pq};
use hydrofield::suite::{self, SuiteOptions};
use hydrofield::wavefunction::{expectation_r_power, StateJson};
use hydrofield::{build_state, HydrogenState, Rational};

use crate::output::{csv_line, emit, emit_str, io_err, json_string, table, AppError, AppResult};
use crate::{Cli, Command, Format, StateArgs, Unit};

/// Largest principal number accepted on the command line.
pub const N_CEILING: i64 = 30;

pub fn run(cli: &Cli) -> AppResult<()> {
    let g = &cli.global;
    let constants = load_constants(g.constants.as_deref())?;
    if g.format == Format::Pgm && !matches!(cli.command, Command::Section { .. }) {
        return Err(AppError::Input("--format pgm applies to section only".into()));
    }
    let out = g.out.as_deref();
    match &cli.command {
        Command::State { state, unit } => cmd_state(state, *unit, g.format, out),
        Command::Table2 { unit } => cmd_table2(*unit, g.format, out),
        Command::Spin2p => cmd_spin2p(&constants, g.format, out),
        Command::Section { state, plane, extent, resolution, form, arrows, arrow_stride } => {
            let s = state_from(state)?;
            let extent = extent.unwrap_or_else(|| grid::default_extent(s.n()));
            let spec = GridSpec::new(*plane, extent, *resolution)?.with_form((*form).into());
            cmd_section(&s, &spec, g.format, out, arrows.as_deref(), *arrow_stride, &constants)
        }
        Command::Expect { state, k } => cmd_expect(state, *k, g.format, out),
        Command::Verify { n_max, inject_fault } => {
            if *n_max == 0 || i64::from(*n_max) > N_CEILING {
                return Err(AppError::Input(format!("--n-max must be in 1..={N_CEILING}")));
            }
            let opts = SuiteOptions { n_max: *n_max, constants, fault: *inject_fault, ..Default::default() };
            cmd_verify(&opts, g.format, out)
        }
    }
}

fn load_constants(path: Option<&Path>) -> AppResult<PhysicalConstants> {
    let Some(path) = path else {
        return Ok(PhysicalConstants::default());
    };
    let text = fs::read_to_string(path).map_err(|e| io_err(Some(path), e))?;
    let c: PhysicalConstants = serde_json::from_str(&text)
        .map_err(|e| AppError::Input(format!("{}: {e}", path.display())))?;
    c.validate()?;
    Ok(c)
}

fn state_from(a: &StateArgs) -> AppResult<HydrogenState> {
    if a.n > N_CEILING {
        return Err(AppError::Input(format!("n must be <= {N_CEILING} (got n={})", a.n)));
    }
    Ok(build_state(a.n, a.l, a.m)?)
}

fn unit_scale(unit: Unit, n: u32) -> Rational {
    match unit {
        Unit::E1 => int(1),
        Unit::En => int(i64::from(n) * i64::from(n)),
    }
}

const ROW_NAMES: [&str; 7] = ["KE_r", "KE_theta", "KE_phi", "dynamic", "KE", "V", "total"];

#[derive(Serialize)]
struct StateOut<'a> {
    n: u32,
    l: u32,
    m: i32,
    #[serde(flatten)]
    energies: EnergyJson,
    #[serde(rename = "eV")]
    ev: EvOut,
    wavefunction: &'a StateJson,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct EvOut {
    e1_ev: f64,
    total: f64,
    note: &'static str,
}

fn cmd_state(a: &StateArgs, unit: Unit, format: Format, out: Option<&Path>) -> AppResult<()> {
    let s = state_from(a)?;
    let b = energy::decompose(&s)?;
    let text = match format {
        Format::Text => {
            let scale = unit_scale(unit, s.n());
            let rows: Vec<Vec<String>> = ROW_NAMES
                .iter()
                .zip(b.fields())
                .map(|(name, (_, v))| {
                    vec![
                        name.to_string(),
                        to_pq(&(v * &scale)),
                        format!("{:.12}", to_f64(v) * to_f64(&scale)),
                        format!("{:.6}", to_f64(v) * E1_EV),
                    ]
                })
                .collect();
            let unit_label = match unit {
                Unit::E1 => "E1".to_string(),
                Unit::En => format!("E{} = E1/{}", s.n(), s.n() * s.n()),
            };
            format!(
                "state {}\n{}eV column uses E1 = {E1_EV} eV (display only)\n",
                s.qn,
                table(&["term", &format!("exact [{unit_label}]"), "decimal", "eV"], &rows)
            )
        }
        Format::Json => {
            let wf = s.to_json_value();
            json_string(&StateOut {
                n: s.n(),
                l: s.l(),
                m: s.m(),
                energies: b.to_json(),
                ev: EvOut { e1_ev: E1_EV, total: to_f64(&b.total) * E1_EV, note: "display only" },
                wavefunction: &wf,
            })
        }
        Format::Csv => {
            let mut head = vec!["n".to_string(), "l".into(), "m".into()];
            head.extend(b.fields().iter().map(|(k, _)| k.to_string()));
            let mut row = vec![s.n().to_string(), s.l().to_string(), s.m().to_string()];
            row.extend(b.fields().iter().map(|(_, v)| to_pq(v)));
            csv_line(&head) + &csv_line(&row)
        }
        Format::Pgm => unreachable!("rejected in run"),
    };
    emit_str(out, &text)
}

#[derive(Serialize)]
struct TableOut {
    unit: &'static str,
    rows: Vec<TableRowOut>,
}

#[derive(Serialize)]
struct TableRowOut {
    label: &'static str,
    n: u32,
    l: u32,
    m: i32,
    #[serde(flatten)]
    energies: EnergyJson,
}

pub const TABLE_CSV_HEADER: [&str; 11] =
    ["label", "n", "l", "m", "keR", "keTheta", "kePhi", "dynamic", "totalKE", "potential", "total"];

fn cmd_table2(unit: Unit, format: Format, out: Option<&Path>) -> AppResult<()> {
    let rows = energy::table2()?;
    let text = match format {
        Format::Text => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let scale = unit_scale(unit, r.n);
                    let mut cells = vec![r.label.to_string()];
                    cells.extend(r.breakdown.fields().iter().map(|(_, v)| to_pq(&(*v * &scale))));
                    cells
                })
                .collect();
            let mut header = vec!["state"];
            header.extend(ROW_NAMES);
            let note = match unit {
                Unit::E1 => "energies in units of E1",
                Unit::En => "energies in units of E_n = E1/n^2",
            };
            format!("{}{note}\n", table(&header, &body))
        }
        Format::Json => json_string(&TableOut {
            unit: "E1",
            rows: rows
                .iter()
                .map(|r| TableRowOut { label: r.label, n: r.n, l: r.l, m: r.m, energies: r.breakdown.to_json() })
                .collect(),
        }),
        Format::Csv => {
            let header: Vec<String> = TABLE_CSV_HEADER.iter().map(|s| s.to_string()).collect();
            let mut text = csv_line(&header);
            for r in &rows {
                let mut cells = vec![r.label.to_string(), r.n.to_string(), r.l.to_string(), r.m.to_string()];
                cells.extend(r.breakdown.fields().iter().map(|(_, v)| to_pq(v)));
                text.push_str(&csv_line(&cells));
            }
            text
        }
        Format::Pgm => unreachable!("rejected in run"),
    };
    emit_str(out, &text)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Spin2pOut {
    period: f64,
    period_from_moment: f64,
    f_field: f64,
    f_particle: f64,
    r3_expectation: String,
    velocity3a: f64,
    velocity3a_over_c: f64,
    explicit_dynamic_joules: f64,
    explicit_dynamic_e1: String,
    operator_dynamic_e1: String,
    agreement: bool,
    constants: PhysicalConstants,
}

impl Spin2pOut {
    fn new(r: &Spin2pReport, c: &PhysicalConstants) -> Self {
        Self {
            period: r.period,
            period_from_moment: r.period_from_moment,
            f_field: r.f_field,
            f_particle: r.f_particle,
            r3_expectation: to_pq(&r.r3_expectation),
            velocity3a: r.velocity_3a,
            velocity3a_over_c: r.velocity_3a_over_c,
            explicit_dynamic_joules: r.explicit_dynamic_joules,
            explicit_dynamic_e1: to_pq(&r.explicit_dynamic_e1),
            operator_dynamic_e1: to_pq(&r.operator_dynamic_e1),
            agreement: r.agreement,
            constants: *c,
        }
    }

    fn pairs(&self) -> Vec<(&'static str, String, &'static str)> {
        vec![
            ("period", format!("{:.9e}", self.period), "s"),
            ("periodFromMoment", format!("{:.9e}", self.period_from_moment), "s"),
            ("fField", format!("{:.6e}", self.f_field), "Hz"),
            ("fParticle", format!("{:.6e}", self.f_particle), "Hz"),
            ("r3Expectation", self.r3_expectation.clone(), "a^3"),
            ("velocity3a", format!("{:.6e}", self.velocity3a), "m/s"),
            ("velocity3aOverC", format!("{:.6e}", self.velocity3a_over_c), ""),
            ("explicitDynamicJoules", format!("{:.9e}", self.explicit_dynamic_joules), "J"),
            ("explicitDynamicE1", self.explicit_dynamic_e1.clone(), "E1"),
            ("operatorDynamicE1", self.operator_dynamic_e1.clone(), "E1"),
            ("agreement", self.agreement.to_string(), ""),
        ]
    }
}

fn cmd_spin2p(c: &PhysicalConstants, format: Format, out: Option<&Path>) -> AppResult<()> {
    let report = angular::spin2p_report(c)?;
    let o = Spin2pOut::new(&report, c);
    let text = match format {
        Format::Text => {
            let rows: Vec<Vec<String>> =
                o.pairs().into_iter().map(|(k, v, u)| vec![k.to_string(), v, u.to_string()]).collect();
            format!(
                "2p spinning field (v at r = 3a, sin(theta) = 1; {:.3}% of c)\n{}",
                100.0 * o.velocity3a_over_c,
                table(&["quantity", "value", "unit"], &rows)
            )
        }
        Format::Json => json_string(&o),
        Format::Csv => {
            let mut text = csv_line(&["quantity".into(), "value".into(), "unit".into()]);
            for (k, v, u) in o.pairs() {
                text.push_str(&csv_line(&[k.to_string(), v, u.to_string()]));
            }
            text
        }
        Format::Pgm => unreachable!("rejected in run"),
    };
    emit_str(out, &text)?;
    if !report.agreement {
        return Err(AppError::Invariant("explicit and operator dynamic energies disagree".into()));
    }
    Ok(())
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SectionOut {
    state: String,
    plane: Plane,
    extent: f64,
    resolution: usize,
    form: grid::AzimuthalForm,
    lobes: LobeReport,
    summary: String,
    raster: Option<String>,
}

#[derive(Serialize)]
struct ArrowsOut<'a> {
    state: String,
    period: f64,
    unit: &'static str,
    arrows: &'a [grid::Arrow],
}

fn cmd_section(
    s: &HydrogenState,
    spec: &GridSpec,
    format: Format,
    out: Option<&Path>,
    arrows: Option<&Path>,
    stride: usize,
    c: &PhysicalConstants,
) -> AppResult<()> {
    let raster = grid::section(s, spec)?;
    let lobes = grid::lobe_report(s, &raster);
    let summary = lobes.summary();

    if let Some(path) = arrows {
        let period = angular::spinning_period_2p(c)?;
        let list = grid::velocity_field(s, spec, period, c, stride, 0.0)?;
        let doc = ArrowsOut { state: s.qn.to_string(), period, unit: "m/s", arrows: &list };
        emit_str(Some(path), &json_string(&doc))?;
    }

    let as_pgm = |p: Option<&Path>| {
        format == Format::Pgm || p.and_then(|p| p.extension()).is_some_and(|e| e.eq_ignore_ascii_case("pgm"))
    };
    let write_raster = |p: Option<&Path>| -> AppResult<()> {
        if as_pgm(p) {
            emit(p, |w: &mut dyn Write| raster.write_pgm(w))
        } else {
            emit(p, |w: &mut dyn Write| raster.write_csv(w))
        }
    };

    match format {
        Format::Csv | Format::Pgm => {
            write_raster(out)?;
            eprintln!("{summary}");
        }
        Format::Text | Format::Json => {
            if out.is_some() {
                write_raster(out)?;
            }
            let text = if format == Format::Json {
                json_string(&SectionOut {
                    state: s.qn.to_string(),
                    plane: spec.plane,
                    extent: spec.extent,
                    resolution: spec.resolution,
                    form: spec.form,
                    lobes: lobes.clone(),
                    summary: summary.clone(),
                    raster: out.map(|p| p.display().to_string()),
                })
            } else {
                format!(
                    "section {} plane {} extent {} resolution {} form {}\npeak at r = {:.4} a, angle {:.2} deg\n{}\n{} in-plane maxima\n",
                    s.qn,
                    spec.plane,
                    spec.extent,
                    spec.resolution,
                    match spec.form {
                        grid::AzimuthalForm::Standing => "standing",
                        grid::AzimuthalForm::Complex => "complex",
                    },
                    lobes.peak_radius,
                    lobes.peak_angle.to_degrees(),
                    summary,
                    lobes.in_plane,
                )
            };
            emit_str(None, &text)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ExpectOut {
    n: u32,
    l: u32,
    m: i32,
    k: i32,
    value: String,
    approx: f64,
    unit: String,
}

fn cmd_expect(a: &StateArgs, k: i32, format: Format, out: Option<&Path>) -> AppResult<()> {
    let s = state_from(a)?;
    let v = expectation_r_power(&s, k)?;
    let o = ExpectOut { n: s.n(), l: s.l(), m: s.m(), k, value: to_pq(&v), approx: to_f64(&v), unit: format!("a^{k}") };
    let text = match format {
        Format::Text => format!("<r^{k}> for {} = {} a^{k} ({:.12})\n", s.qn, o.value, o.approx),
        Format::Json => json_string(&o),
        Format::Csv => {
            let head = ["n", "l", "m", "k", "value", "approx"].map(String::from);
            let row = [o.n.to_string(), o.l.to_string(), o.m.to_string(), k.to_string(), o.value.clone(), o.approx.to_string()];
            csv_line(&head) + &csv_line(&row)
        }
        Format::Pgm => unreachable!("rejected in run"),
    };
    emit_str(out, &text)
}

#[derive(Serialize)]
struct VerifyOut<'a> {
    passed: bool,
    #[serde(flatten)]
    report: &'a suite::SuiteReport,
}

fn cmd_verify(opts: &SuiteOptions, format: Format, out: Option<&Path>) -> AppResult<()> {
    let report = suite::run(opts)?;
    let text = match format {
        Format::Text => format!("{report}\n"),
        Format::Json => json_string(&VerifyOut { passed: report.passed(), report: &report }),
        Format::Csv => {
            let mut text = csv_line(&["family".into(), "status".into(), "checks".into(), "failures".into()]);
            for f in &report.families {
                let status = if f.passed() { "pass" } else { "fail" };
                text.push_str(&csv_line(&[
                    f.name.to_string(),
                    status.to_string(),
                    f.checks.to_string(),
                    f.failures.len().to_string(),
                ]));
            }
            text
        }
        Format::Pgm => unreachable!("rejected in run"),
    };
    emit_str(out, &text)?;
    if report.passed() {
        Ok(())
    } else {
        Err(AppError::Invariant(format!("invariant failure: {}", report.failed_families().join(", "))))
    }
}
