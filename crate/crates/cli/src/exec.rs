//! Command dispatch and JSON rendering.

use crate::fixtures;
use crate::session::{expand_log, parse_session_with, Command, IdealArg, ModuleExpr, RingDecl, RingDefaults, Session};
use charvar_core::charvar::{self, Verdict};
use charvar_core::filt::{self, FilteredMorphism, GoodFilteredModule, DEFAULT_SLACK};
use charvar_core::ideal::IdealHandle;
use charvar_core::monomial::ModuleOrder;
use charvar_core::symp::{self, ConormalSpec, CotangentChart};
use charvar_core::vector::Vector;
use charvar_core::weyl::{self, TMatrix, WeylPresentation};
use charvar_core::{gb, Error as CoreError, MonomialOrder, PolyRing, Polynomial};
use serde_json::{json, Map, Value};
use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

pub const TIMEOUT_ENV: &str = "CHARVAR_TIMEOUT_SECS";
pub const DEFAULT_TIMEOUT_SECS: u64 = 60;

/// Monomial order used to print commutative polynomials and bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputOrder {
    DegRevLex,
    /// The ring's own order (the cotangent weighting).
    #[default]
    Weighted,
}

#[derive(Debug, Clone)]
pub struct Options {
    pub order: OutputOrder,
    pub slack: i64,
    pub defaults: RingDefaults,
    /// Per Gröbner run; `None` disables the limit.
    pub timeout: Option<Duration>,
    /// Directory against which `fixtures` paths are resolved.
    pub base_dir: Option<PathBuf>,
    /// Set while running a fixture corpus; forbids a nested `fixtures`.
    pub nested: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            order: OutputOrder::Weighted,
            slack: DEFAULT_SLACK,
            defaults: RingDefaults::default(),
            timeout: Some(Duration::from_secs(DEFAULT_TIMEOUT_SECS)),
            base_dir: None,
            nested: false,
        }
    }
}

/// Reads `CHARVAR_TIMEOUT_SECS`; `0` disables the limit.
pub fn timeout_from_env() -> Result<Option<Duration>, String> {
    match std::env::var(TIMEOUT_ENV) {
        Err(_) => Ok(Some(Duration::from_secs(DEFAULT_TIMEOUT_SECS))),
        Ok(v) => match v.trim().parse::<u64>() {
            Ok(0) => Ok(None),
            Ok(s) => Ok(Some(Duration::from_secs(s))),
            Err(_) => Err(format!("{TIMEOUT_ENV}={v} is not a number of seconds")),
        },
    }
}

/// Ordered so that the most severe outcome of a session wins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok,
    Failure,
    ParseError,
    Timeout,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Failure => 1,
            Status::ParseError => 2,
            Status::Timeout => 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SessionOutput {
    pub values: Vec<Value>,
    pub status: Status,
}

impl SessionOutput {
    pub fn render(&self) -> String {
        render(&self.values)
    }
}

/// A JSON array with one compact element per line.
pub fn render(values: &[Value]) -> String {
    if values.is_empty() {
        return "[]\n".to_string();
    }
    let lines: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("[\n{}\n]\n", lines.join(",\n"))
}

pub fn run_text(text: &str, opts: &Options) -> SessionOutput {
    match parse_session_with(text, opts.defaults) {
        Ok(s) => run_session(&s, opts),
        Err(e) => SessionOutput {
            values: vec![json!({"error": {"kind": "parse", "line": e.line, "column": e.column, "message": e.message}})],
            status: Status::ParseError,
        },
    }
}

enum RunError {
    Core(CoreError),
    Msg(String),
}

impl From<CoreError> for RunError {
    fn from(e: CoreError) -> Self {
        RunError::Core(e)
    }
}

type Run<T> = Result<T, RunError>;

struct State<'a> {
    opts: &'a Options,
    ring: Option<RingDecl>,
    modules: HashMap<String, WeylPresentation>,
    status: Status,
}

/// Runs the commands in order, stopping at the first error.
pub fn run_session(s: &Session, opts: &Options) -> SessionOutput {
    gb::set_timeout(opts.timeout);
    let ring = match (opts.defaults.prime, opts.defaults.dim) {
        (Some(p), Some(d)) => Some(RingDecl { p, d, log: vec![] }),
        _ => None,
    };
    let mut st = State {
        opts,
        ring,
        modules: HashMap::new(),
        status: Status::Ok,
    };
    let mut values = Vec::new();
    for line in &s.lines {
        match st.run(&line.command) {
            Ok(v) => values.push(v),
            Err(e) => {
                let (kind, message, status) = match e {
                    RunError::Core(CoreError::Timeout) => ("timeout", CoreError::Timeout.to_string(), Status::Timeout),
                    RunError::Core(e) => ("run", e.to_string(), Status::Failure),
                    RunError::Msg(m) => ("run", m, Status::Failure),
                };
                values.push(json!({"error": {"kind": kind, "line": line.line, "message": message}}));
                st.status = st.status.max(status);
                break;
            }
        }
    }
    SessionOutput {
        values,
        status: st.status,
    }
}

fn poly_string(ring: &Arc<PolyRing>, v: &Vector, order: OutputOrder) -> String {
    match order {
        OutputOrder::Weighted => Polynomial::from_vector(ring, v).to_string(),
        OutputOrder::DegRevLex => Polynomial::from_vector(&ring.with_order(MonomialOrder::DegRevLex), v).to_string(),
    }
}

/// Re-sorts the terms of a polynomial already printed in the ring's order.
fn reorder(ring: &Arc<PolyRing>, text: &str, order: OutputOrder) -> Run<String> {
    Ok(match order {
        OutputOrder::Weighted => text.to_string(),
        OutputOrder::DegRevLex => poly_string(ring, &ring.parse(text)?.v, order),
    })
}

/// Reduced Gröbner basis in the output order.
fn ideal_strings(ideal: &IdealHandle, order: OutputOrder) -> Run<Vec<String>> {
    Ok(match order {
        OutputOrder::Weighted => ideal.to_strings()?,
        OutputOrder::DegRevLex => ideal
            .groebner_with(&MonomialOrder::DegRevLex)?
            .iter()
            .map(|g| poly_string(&ideal.ring, &g.v, order))
            .collect(),
    })
}

fn opt_bool(b: Option<bool>) -> Value {
    b.map_or(Value::Null, Value::Bool)
}

impl State<'_> {
    fn ring(&self) -> Run<&RingDecl> {
        self.ring
            .as_ref()
            .ok_or_else(|| RunError::Msg("no ring declared".into()))
    }

    fn module(&self, name: &str) -> Run<&WeylPresentation> {
        self.modules
            .get(name)
            .ok_or_else(|| RunError::Msg(format!("unbound module name `{name}`")))
    }

    fn operator(&self, text: &str) -> Run<Vector> {
        let r = self.ring()?;
        let expanded = expand_log(text, r.r()).map_err(|(_, m)| RunError::Msg(m))?;
        Ok(weyl::parse_operator(r.field(), r.d, &expanded)?)
    }

    fn chart(&self) -> Run<CotangentChart> {
        let r = self.ring()?;
        Ok(CotangentChart::new(r.field(), r.d, r.r())?)
    }

    fn build(&self, expr: &ModuleExpr) -> Run<(WeylPresentation, Option<String>)> {
        let r = self.ring()?;
        let (field, d) = (r.field(), r.d);
        Ok(match expr {
            ModuleExpr::Cokernel { rows, shifts } => {
                let rank = rows
                    .first()
                    .map(|row| row.len())
                    .or(shifts.as_ref().map(|s| s.len()))
                    .unwrap_or(1);
                let shifts = shifts.clone().unwrap_or_else(|| vec![0; rank]);
                let ord = ModuleOrder::top(weyl::weyl_order(d), vec![0; rank]);
                let rels = rows
                    .iter()
                    .map(|row| {
                        let entries = row.iter().map(|e| self.operator(e)).collect::<Run<Vec<_>>>()?;
                        Ok(Vector::from_entries(&entries, field, &ord))
                    })
                    .collect::<Run<Vec<_>>>()?;
                (WeylPresentation::new(field, d, shifts, rels), None)
            }
            ModuleExpr::Free { shifts } => (WeylPresentation::free(field, d, shifts.clone()), None),
            ModuleExpr::Connection { mats } => {
                let n = (mats[0].len() as f64).sqrt().round() as usize;
                let parsed: Vec<TMatrix> = mats
                    .iter()
                    .map(|m| {
                        m.chunks(n)
                            .map(|row| row.iter().map(|e| self.operator(e)).collect::<Run<Vec<_>>>())
                            .collect::<Run<Vec<_>>>()
                    })
                    .collect::<Run<_>>()?;
                let (a, b) = parsed.split_at(r.r());
                let li = weyl::log_induce(field, d, n, a, b, weyl::DEFAULT_INTEGRABILITY_TRUNCATION)?;
                (li.presentation, li.integrability_warning)
            }
        })
    }

    fn run(&mut self, cmd: &Command) -> Run<Value> {
        let order = self.opts.order;
        let slack = self.opts.slack;
        Ok(match cmd {
            Command::Ring(r) => {
                self.ring = Some(r.clone());
                self.modules.clear();
                json!({"ring": {"p": r.p, "d": r.d, "log": r.log}})
            }
            Command::Module { name, expr } => {
                let (m, warning) = self.build(expr)?;
                let mut out = Map::new();
                out.insert("module".into(), json!(name));
                out.insert("rank".into(), json!(m.rank()));
                out.insert("shifts".into(), json!(m.shifts));
                out.insert("relations".into(), json!(m.relation_strings()));
                if let Some(w) = warning {
                    out.insert("integrability_warning".into(), json!(w));
                }
                self.modules.insert(name.clone(), m);
                Value::Object(out)
            }
            Command::Gr(name) => {
                let gm = GoodFilteredModule::from_weyl(self.module(name)?);
                let gp = filt::gr_module(&gm)?;
                let rels: Vec<Vec<String>> = gp
                    .relations
                    .iter()
                    .map(|r| (0..gp.rank()).map(|j| poly_string(&gp.ring, &r.component(j), order)).collect())
                    .collect();
                json!({"shifts": gp.shifts, "relations": rels, "dim": gp.dim()?, "zero": gp.is_zero()?})
            }
            Command::Car(name) => {
                let car = charvar::char_variety(self.module(name)?)?;
                json!({"char_ideal": ideal_strings(&car.ideal, order)?, "dim": car.dim, "components": car.component_names()})
            }
            Command::Holonomic(name) => {
                let car = charvar::char_variety(self.module(name)?)?;
                let rep = charvar::holonomicity_report(&car);
                let mut out = Map::new();
                out.insert("dim".into(), json!(rep.dim));
                out.insert("d".into(), json!(rep.d));
                out.insert("holonomic".into(), json!(rep.holonomic));
                if rep.zero {
                    out.insert("zero".into(), json!(true));
                }
                Value::Object(out)
            }
            Command::Purity(name) => {
                let rep = charvar::purity_report(self.module(name)?)?;
                if rep.verdict == Verdict::Inconsistent {
                    self.status = self.status.max(Status::Failure);
                }
                json!({
                    "module": name,
                    "d": rep.d,
                    "char_ideal": ideal_strings(&rep.car.ideal, order)?,
                    "dim": rep.car.dim,
                    "components": rep.car.component_names(),
                    "ext_pattern": rep.ext_pattern,
                    "certified_codim": rep.certified_codim,
                    "component_codims": rep.component_codims,
                    "verdict": rep.verdict.as_str(),
                    "effective_bound": rep.effective_bound,
                })
            }
            Command::Ext { name, s } => {
                let e = weyl::weyl_ext(self.module(name)?, *s)?;
                let zero = charvar::presentation_is_zero(&e)?;
                let left = weyl::transpose_side(&e)?;
                let char_ideal = if zero {
                    vec![]
                } else {
                    ideal_strings(&charvar::char_variety(&left)?.ideal, order)?
                };
                json!({
                    "s": s,
                    "side": "right",
                    "shifts": e.shifts,
                    "relations": e.relation_strings(),
                    "zero": zero,
                    "transposed": {"shifts": left.shifts, "relations": left.relation_strings()},
                    "char_ideal": char_ideal,
                })
            }
            Command::Strict { source, target, rows } => {
                let src = GoodFilteredModule::from_weyl(self.module(source)?);
                let tgt = GoodFilteredModule::from_weyl(self.module(target)?);
                let r = self.ring()?;
                let expanded = rows
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|e| expand_log(e, r.r()).map_err(|(_, m)| RunError::Msg(m)))
                            .collect::<Run<Vec<_>>>()
                    })
                    .collect::<Run<Vec<_>>>()?;
                let refs: Vec<Vec<&str>> = expanded.iter().map(|row| row.iter().map(|s| s.as_str()).collect()).collect();
                let u = FilteredMorphism::parse(src, tgt, &refs)?;
                let rep = filt::is_strict(&u, slack)?;
                let witness = rep.witness.as_ref().map(|(deg, v)| {
                    let element: Vec<String> = (0..u.target.rank()).map(|j| u.target.ring.format(&v.component(j))).collect();
                    json!({"degree": deg, "element": element})
                });
                json!({
                    "strict": rep.strict,
                    "mono": rep.mono,
                    "epi": rep.epi,
                    "gr_mono": rep.gr_mono,
                    "gr_epi": rep.gr_epi,
                    "witness": witness,
                    "effective_bound": rep.effective_bound,
                })
            }
            Command::Resolve { name, length } => {
                let gm = GoodFilteredModule::from_weyl(self.module(name)?);
                let res = filt::good_resolution(&gm, *length)?;
                json!({
                    "ranks": res.ranks(),
                    "shifts": res.shifts(),
                    "gr_exact": res.gr_report(slack)?.exact(),
                    "strict": res.strictness(slack)?,
                })
            }
            Command::Conormal(s) => {
                let chart = self.chart()?;
                let spec = ConormalSpec {
                    s: s.iter().map(|i| i - 1).collect(),
                };
                let ideal = symp::conormal_ideal(&chart, &spec)?;
                json!({"ideal": ideal_strings(&ideal, order)?, "dim": ideal.dim()?})
            }
            Command::Isotropy(gens) => {
                let chart = self.chart()?;
                let refs: Vec<&str> = gens.iter().map(|g| g.as_str()).collect();
                let e = IdealHandle::parse(&chart.ring, &refs)?;
                let res = symp::isotropy_test(&e, &chart)?;
                let certs = res
                    .certificates
                    .iter()
                    .map(|c| {
                        let piece = c.piece.iter().map(|p| reorder(&chart.ring, p, order)).collect::<Run<Vec<_>>>()?;
                        let minor = c.minor.as_ref().map(|m| reorder(&chart.ring, m, order)).transpose()?;
                        Ok(json!({"piece": piece, "minor": minor, "verdict": c.verdict.as_str()}))
                    })
                    .collect::<Run<Vec<_>>>()?;
                json!({"verdict": res.verdict.as_str(), "certificates": certs})
            }
            Command::Lagrangian(arg) => {
                let chart = self.chart()?;
                let rep = match arg {
                    IdealArg::Gens(gens) => {
                        let refs: Vec<&str> = gens.iter().map(|g| g.as_str()).collect();
                        symp::lagrangian_test(&IdealHandle::parse(&chart.ring, &refs)?, &chart, None)?
                    }
                    IdealArg::Module(name) => {
                        let pr = charvar::purity_report(self.module(name)?)?;
                        symp::lagrangian_test_car(&pr.car, &chart, pr.certified_codim)?
                    }
                };
                json!({
                    "dim": rep.dim,
                    "pure": opt_bool(rep.pure),
                    "isotropic": rep.isotropic.as_str(),
                    "lagrangian": opt_bool(rep.lagrangian),
                })
            }
            Command::Containment(name) => {
                let chart = self.chart()?;
                let rep = symp::log_containment_check(self.module(name)?, &chart)?;
                let union = rep
                    .union_ideal
                    .iter()
                    .map(|g| reorder(&chart.ring, g, order))
                    .collect::<Run<Vec<_>>>()?;
                let witnesses = rep
                    .witnesses
                    .iter()
                    .map(|w| {
                        Ok(json!({
                            "generator": reorder(&chart.ring, &w.generator, order)?,
                            "member": w.member,
                            "power": w.power,
                        }))
                    })
                    .collect::<Run<Vec<_>>>()?;
                json!({
                    "contained": rep.contained,
                    "union_ideal": union,
                    "char_ideal": ideal_strings(&rep.car.ideal, order)?,
                    "witnesses": witnesses,
                })
            }
            Command::Relabel { m, gens } => {
                let r = self.ring()?;
                let refs: Vec<&str> = gens.iter().map(|g| g.as_str()).collect();
                let polys = charvar::level_relabel(r.field(), r.d, *m, &refs)?;
                let ideal: Vec<String> = polys.iter().map(|p| poly_string(&p.ring, &p.v, order)).collect();
                json!({"ideal": ideal})
            }
            Command::Fixtures(path) => {
                if self.opts.nested {
                    return Err(RunError::Msg("`fixtures` inside a fixture run".into()));
                }
                let dir = match &self.opts.base_dir {
                    Some(base) => base.join(path),
                    None => PathBuf::from(path),
                };
                let report = fixtures::run_fixtures(&dir, self.opts)
                    .map_err(|e| RunError::Msg(format!("cannot read {}: {e}", dir.display())))?;
                if !report.all_passed() {
                    self.status = self.status.max(Status::Failure);
                }
                json!({"fixtures": report.summary_json()})
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(text: &str) -> SessionOutput {
        run_text(text, &Options::default())
    }

    #[test]
    fn render_is_one_element_per_line() {
        assert_eq!(render(&[]), "[]\n");
        assert_eq!(render(&[json!({"a": 1}), json!([2])]), "[\n{\"a\":1},\n[2]\n]\n");
    }

    #[test]
    fn keys_keep_insertion_order() {
        let out = run("ring p=7 d=1\nmodule M = cokernel [ t1*d1 - 2 ]\nholonomic M");
        assert_eq!(out.values[2].to_string(), r#"{"dim":1,"d":1,"holonomic":true}"#);
    }

    #[test]
    fn timeouts_are_reported() {
        let text = "ring p=7 d=2\nmodule M = cokernel [ t1^3*d2^2 + t2^2*d1 - 1; t2^3*d1^2 - t1*d2 + 3 ]\npurity M";
        let opts = Options {
            timeout: Some(Duration::ZERO),
            ..Options::default()
        };
        let out = run_text(text, &opts);
        assert_eq!(out.status, Status::Timeout);
        assert_eq!(out.values.last().unwrap()["error"]["kind"], "timeout");
    }

    #[test]
    fn run_errors_stop_the_session() {
        let out = run("ring p=7 d=1\nmodule A = free [0]\nmodule B = free [0]\nstrict A B [ d1 ]\ncar A");
        assert_eq!(out.status, Status::Failure);
        assert_eq!(out.values.len(), 4);
        assert_eq!(out.values[3]["error"]["line"], 4);
    }

    #[test]
    fn degrevlex_output_reorders_terms() {
        let text = "ring p=7 d=1\nrelabel m=1 [ xi1_1^2 + t1^3 ]";
        let w = run(text);
        let opts = Options {
            order: OutputOrder::DegRevLex,
            ..Options::default()
        };
        let g = run_text(text, &opts);
        assert_eq!(w.values[1]["ideal"][0], "xi1^2 + t1^3");
        assert_eq!(g.values[1]["ideal"][0], "t1^3 + xi1^2");
    }
}
