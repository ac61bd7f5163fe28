//! The line-oriented session language.
//!
//! ```text
//! ring p=7 d=1 log=1
//! module M = cokernel [ t1*d1 - 2 ]
//! car M
//! ```

use charvar_core::weyl;
use charvar_core::{Error as CoreError, Field};
use std::collections::HashSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingDecl {
    pub p: u64,
    pub d: usize,
    /// 1-based indices of the log directions; always `1..=r`.
    pub log: Vec<usize>,
}

impl RingDecl {
    pub fn r(&self) -> usize {
        self.log.len()
    }

    pub fn field(&self) -> Field {
        Field::new(self.p).expect("validated at parse time")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleExpr {
    /// Relation rows, one entry per generator.
    Cokernel { rows: Vec<Vec<String>>, shifts: Option<Vec<i64>> },
    Free { shifts: Vec<i64> },
    /// One matrix per direction (log directions first), entries row-major.
    Connection { mats: Vec<Vec<String>> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealArg {
    Gens(Vec<String>),
    Module(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Ring(RingDecl),
    Module { name: String, expr: ModuleExpr },
    Gr(String),
    Car(String),
    Holonomic(String),
    Purity(String),
    Ext { name: String, s: i64 },
    Strict { source: String, target: String, rows: Vec<Vec<String>> },
    Resolve { name: String, length: i64 },
    /// 1-based indices of the vanishing coordinates.
    Conormal(Vec<usize>),
    Isotropy(Vec<String>),
    Lagrangian(IdealArg),
    Containment(String),
    Relabel { m: u32, gens: Vec<String> },
    Fixtures(String),
}

impl Command {
    pub fn verb(&self) -> &'static str {
        match self {
            Command::Ring(_) => "ring",
            Command::Module { .. } => "module",
            Command::Gr(_) => "gr",
            Command::Car(_) => "car",
            Command::Holonomic(_) => "holonomic",
            Command::Purity(_) => "purity",
            Command::Ext { .. } => "ext",
            Command::Strict { .. } => "strict",
            Command::Resolve { .. } => "resolve",
            Command::Conormal(_) => "conormal",
            Command::Isotropy(_) => "isotropy",
            Command::Lagrangian(_) => "lagrangian",
            Command::Containment(_) => "containment",
            Command::Relabel { .. } => "relabel",
            Command::Fixtures(_) => "fixtures",
        }
    }
}

pub const VERBS: [&str; 15] = [
    "ring", "module", "gr", "car", "holonomic", "purity", "ext", "strict", "resolve", "conormal",
    "isotropy", "lagrangian", "containment", "relabel", "fixtures",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub line: usize,
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Session {
    pub lines: Vec<Line>,
}

impl Session {
    pub fn ring(&self) -> Option<&RingDecl> {
        self.lines.iter().find_map(|l| match &l.command {
            Command::Ring(r) => Some(r),
            _ => None,
        })
    }

    pub fn commands(&self) -> impl Iterator<Item = &Command> {
        self.lines.iter().map(|l| &l.command)
    }
}

fn join_rows(rows: &[Vec<String>]) -> String {
    rows.iter().map(|r| r.join(", ")).collect::<Vec<_>>().join("; ")
}

fn bracket(inner: &str) -> String {
    if inner.is_empty() {
        "[]".to_string()
    } else {
        format!("[ {inner} ]")
    }
}

fn int_list<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Command::Ring(r) => {
                write!(f, "ring p={} d={}", r.p, r.d)?;
                if !r.log.is_empty() {
                    write!(f, " log={}", int_list(&r.log))?;
                }
                Ok(())
            }
            Command::Module { name, expr } => {
                write!(f, "module {name} = ")?;
                match expr {
                    ModuleExpr::Cokernel { rows, shifts } => {
                        write!(f, "cokernel {}", bracket(&join_rows(rows)))?;
                        if let Some(s) = shifts {
                            write!(f, " shifts {}", bracket(&s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))?;
                        }
                        Ok(())
                    }
                    ModuleExpr::Free { shifts } => {
                        write!(f, "free {}", bracket(&shifts.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
                    }
                    ModuleExpr::Connection { mats } => write!(f, "connection {}", bracket(&join_rows(mats))),
                }
            }
            Command::Gr(n) | Command::Car(n) | Command::Holonomic(n) | Command::Purity(n) | Command::Containment(n) => {
                write!(f, "{} {n}", self.verb())
            }
            Command::Ext { name, s } => write!(f, "ext {name} {s}"),
            Command::Strict { source, target, rows } => {
                write!(f, "strict {source} {target} {}", bracket(&join_rows(rows)))
            }
            Command::Resolve { name, length } => write!(f, "resolve {name} {length}"),
            Command::Conormal(s) => write!(f, "conormal {}", bracket(&s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))),
            Command::Isotropy(g) => write!(f, "isotropy {}", bracket(&g.join("; "))),
            Command::Lagrangian(IdealArg::Gens(g)) => write!(f, "lagrangian {}", bracket(&g.join("; "))),
            Command::Lagrangian(IdealArg::Module(n)) => write!(f, "lagrangian {n}"),
            Command::Relabel { m, gens } => write!(f, "relabel m={m} {}", bracket(&gens.join("; "))),
            Command::Fixtures(p) => write!(f, "fixtures {p}"),
        }
    }
}

impl fmt::Display for Session {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{}", l.command)?;
        }
        Ok(())
    }
}

/// Ring data used when the session has no `ring` line.
#[derive(Debug, Clone, Copy, Default)]
pub struct RingDefaults {
    pub prime: Option<u64>,
    pub dim: Option<usize>,
}

/// A cursor over one line; columns are 1-based character positions.
struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn new(text: &str, line: usize) -> Self {
        Cursor {
            chars: text.chars().collect(),
            pos: 0,
            line,
        }
    }

    fn err<T>(&self, col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            line: self.line,
            column: col,
            message: msg.into(),
        })
    }

    fn col(&self) -> usize {
        self.pos + 1
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.chars.len()
    }

    /// A maximal run of non-space characters other than brackets.
    fn word(&mut self) -> Option<(usize, String)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len()
            && !self.chars[self.pos].is_whitespace()
            && self.chars[self.pos] != '['
            && self.chars[self.pos] != ']'
        {
            self.pos += 1;
        }
        (self.pos > start).then(|| (start + 1, self.chars[start..self.pos].iter().collect()))
    }

    fn expect_word(&mut self, what: &str) -> Result<(usize, String), ParseError> {
        match self.word() {
            Some(w) => Ok(w),
            None => self.err(self.col(), format!("expected {what}")),
        }
    }

    fn name(&mut self) -> Result<(usize, String), ParseError> {
        let (col, w) = self.expect_word("a module name")?;
        let ok = w.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && w.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return self.err(col, format!("`{w}` is not a valid name"));
        }
        Ok((col, w))
    }

    fn int<T: std::str::FromStr>(&mut self, what: &str) -> Result<(usize, T), ParseError> {
        let (col, w) = self.expect_word(what)?;
        match w.parse() {
            Ok(v) => Ok((col, v)),
            Err(_) => self.err(col, format!("expected {what}, found `{w}`")),
        }
    }

    fn literal(&mut self, lit: &str) -> Result<(), ParseError> {
        let (col, w) = self.expect_word(&format!("`{lit}`"))?;
        if w != lit {
            return self.err(col, format!("expected `{lit}`, found `{w}`"));
        }
        Ok(())
    }

    /// `[ ... ]` split into rows at `;` and entries at `,`, with the column
    /// of every entry.
    fn bracket(&mut self) -> Result<Vec<Vec<(usize, String)>>, ParseError> {
        self.skip_ws();
        if self.pos >= self.chars.len() || self.chars[self.pos] != '[' {
            return self.err(self.col(), "expected `[`");
        }
        let open = self.col();
        self.pos += 1;
        let mut rows = Vec::new();
        let mut row = Vec::new();
        let mut cur = String::new();
        let mut cur_col = self.col();
        loop {
            if self.pos >= self.chars.len() {
                return self.err(open, "unclosed `[`");
            }
            let c = self.chars[self.pos];
            self.pos += 1;
            match c {
                ']' | ';' | ',' => {
                    let lead = cur.len() - cur.trim_start().len();
                    let entry = cur.trim().to_string();
                    let entry_col = cur_col + cur[..lead].chars().count();
                    let closing = c == ']';
                    if entry.is_empty() {
                        if !(closing && row.is_empty() && rows.is_empty()) {
                            return self.err(entry_col, "empty entry");
                        }
                    } else {
                        row.push((entry_col, entry));
                    }
                    if c != ',' && !row.is_empty() {
                        rows.push(std::mem::take(&mut row));
                    }
                    if closing {
                        return Ok(rows);
                    }
                    cur.clear();
                    cur_col = self.col();
                }
                '[' => return self.err(self.pos, "nested `[`"),
                _ => cur.push(c),
            }
        }
    }

    fn flat_bracket(&mut self) -> Result<Vec<(usize, String)>, ParseError> {
        let rows = self.bracket()?;
        let mut out = Vec::new();
        for r in rows {
            if r.len() != 1 {
                return self.err(r[1].0, "expected one entry per row");
            }
            out.extend(r);
        }
        Ok(out)
    }

    fn key_value(&mut self, key: &str) -> Result<(usize, String), ParseError> {
        let (col, w) = self.expect_word(&format!("`{key}=`"))?;
        match w.strip_prefix(&format!("{key}=")) {
            Some(v) => Ok((col + key.len() + 1, v.to_string())),
            None => self.err(col, format!("expected `{key}=`, found `{w}`")),
        }
    }

    fn finish(&mut self, verb: &str) -> Result<(), ParseError> {
        if !self.at_end() {
            return self.err(self.col(), format!("too many arguments for `{verb}`"));
        }
        Ok(())
    }
}

/// Replaces the log derivations `l<i>` by `t<i>*d<i>`.
pub fn expand_log(text: &str, r: usize) -> Result<String, (usize, String)> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let ident: String = chars[start..i].iter().collect();
            match ident.strip_prefix('l').and_then(|n| n.parse::<usize>().ok()) {
                Some(k) if k >= 1 && k <= r => out.push_str(&format!("(t{k}*d{k})")),
                Some(k) => return Err((start + 1, format!("l{k} is not a log direction of the ring"))),
                None => out.push_str(&ident),
            }
        } else {
            out.push(c);
            i += 1;
        }
    }
    Ok(out)
}

fn check_operator(ring: &RingDecl, line: usize, col: usize, text: &str, t_only: bool) -> Result<(), ParseError> {
    let err = |c: usize, m: String| ParseError {
        line,
        column: col + c - 1,
        message: m,
    };
    let expanded = expand_log(text, ring.r()).map_err(|(c, m)| err(c, m))?;
    let v = match weyl::parse_operator(ring.field(), ring.d, &expanded) {
        Ok(v) => v,
        // columns inside an expanded `l<i>` are not meaningful; report the entry
        Err(CoreError::Parse { col: c, msg }) if expanded == text => return Err(err(c, format!("malformed operator: {msg}"))),
        Err(e) => return Err(err(1, format!("malformed operator `{text}`: {e}"))),
    };
    if t_only && v.terms.iter().any(|t| t.m.0[ring.d..].iter().any(|&x| x > 0)) {
        return Err(err(1, format!("connection entry `{text}` must lie in F_p[t]")));
    }
    Ok(())
}

fn is_prime(p: u64) -> bool {
    Field::new(p).is_ok()
}

pub fn parse_session(text: &str) -> Result<Session, ParseError> {
    parse_session_with(text, RingDefaults::default())
}

/// Parses a session; `defaults` supplies the ring when there is no `ring`
/// line.
pub fn parse_session_with(text: &str, defaults: RingDefaults) -> Result<Session, ParseError> {
    let mut lines = Vec::new();
    let mut ring: Option<RingDecl> = match (defaults.prime, defaults.dim) {
        (Some(p), Some(d)) if is_prime(p) => Some(RingDecl { p, d, log: vec![] }),
        _ => None,
    };
    let mut declared_ring = false;
    let mut names: HashSet<String> = HashSet::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut cur = Cursor::new(content, line_no);
        if cur.at_end() {
            continue;
        }
        let (vcol, verb) = cur.expect_word("a verb")?;
        let need_ring = |cur: &Cursor, verb: &str| -> Result<RingDecl, ParseError> {
            match &ring {
                Some(r) => Ok(r.clone()),
                None => cur.err(vcol, format!("`{verb}` before the ring declaration")),
            }
        };
        let command = match verb.as_str() {
            "ring" => {
                if declared_ring {
                    return cur.err(vcol, "second ring declaration");
                }
                if !names.is_empty() {
                    return cur.err(vcol, "ring declared after a module");
                }
                let (pcol, p) = cur.key_value("p")?;
                let p: u64 = p.parse().or_else(|_| cur.err(pcol, format!("`{p}` is not an integer")))?;
                if !is_prime(p) {
                    return cur.err(pcol, format!("{p} is not a prime below 2^31"));
                }
                let (dcol, d) = cur.key_value("d")?;
                let d: usize = d.parse().or_else(|_| cur.err(dcol, format!("`{d}` is not a dimension")))?;
                let mut log = Vec::new();
                if !cur.at_end() {
                    let (lcol, l) = cur.key_value("log")?;
                    if !l.is_empty() {
                        for part in l.split(',') {
                            let i: usize = part.trim().parse().or_else(|_| cur.err(lcol, format!("`{part}` is not an index")))?;
                            log.push(i);
                        }
                    }
                    let mut sorted = log.clone();
                    sorted.sort();
                    if sorted != (1..=log.len()).collect::<Vec<_>>() {
                        return cur.err(lcol, "log components must be the first coordinates 1..r");
                    }
                    if log.len() > d {
                        return cur.err(lcol, format!("{} log components in dimension {d}", log.len()));
                    }
                    log = sorted;
                }
                cur.finish("ring")?;
                declared_ring = true;
                let decl = RingDecl { p, d, log };
                ring = Some(decl.clone());
                Command::Ring(decl)
            }
            "module" => {
                let r = need_ring(&cur, "module")?;
                let (ncol, name) = cur.name()?;
                if names.contains(&name) {
                    return cur.err(ncol, format!("module `{name}` is already bound"));
                }
                cur.literal("=")?;
                let (kcol, kind) = cur.expect_word("`cokernel`, `free` or `connection`")?;
                let expr = match kind.as_str() {
                    "cokernel" => {
                        let rows = cur.bracket()?;
                        let width = rows.first().map_or(1, |r| r.len());
                        for row in &rows {
                            if row.len() != width {
                                return cur.err(row[0].0, format!("row has {} entries, expected {width}", row.len()));
                            }
                            for (c, e) in row {
                                check_operator(&r, line_no, *c, e, false)?;
                            }
                        }
                        let shifts = if cur.at_end() {
                            None
                        } else {
                            cur.literal("shifts")?;
                            let s = int_entries(&mut cur)?;
                            if !rows.is_empty() && s.len() != width {
                                return cur.err(kcol, format!("{} shifts for {width} generators", s.len()));
                            }
                            Some(s)
                        };
                        let rows = rows.into_iter().map(|r| r.into_iter().map(|(_, e)| e).collect()).collect();
                        ModuleExpr::Cokernel { rows, shifts }
                    }
                    "free" => ModuleExpr::Free { shifts: int_entries(&mut cur)? },
                    "connection" => {
                        let rows = cur.bracket()?;
                        if rows.len() != r.d {
                            return cur.err(kcol, format!("{} connection matrices for d = {}", rows.len(), r.d));
                        }
                        let n2 = rows[0].len();
                        let n = (n2 as f64).sqrt().round() as usize;
                        for row in &rows {
                            if row.len() != n2 || n * n != n2 {
                                return cur.err(row[0].0, "connection matrices must be square and of equal size");
                            }
                            for (c, e) in row {
                                check_operator(&r, line_no, *c, e, true)?;
                            }
                        }
                        let mats = rows.into_iter().map(|r| r.into_iter().map(|(_, e)| e).collect()).collect();
                        ModuleExpr::Connection { mats }
                    }
                    other => return cur.err(kcol, format!("unknown module constructor `{other}`")),
                };
                cur.finish("module")?;
                names.insert(name.clone());
                Command::Module { name, expr }
            }
            "gr" | "car" | "holonomic" | "purity" | "containment" => {
                let n = bound_name(&mut cur, &names)?;
                cur.finish(&verb)?;
                match verb.as_str() {
                    "gr" => Command::Gr(n),
                    "car" => Command::Car(n),
                    "holonomic" => Command::Holonomic(n),
                    "purity" => Command::Purity(n),
                    _ => Command::Containment(n),
                }
            }
            "ext" | "resolve" => {
                let n = bound_name(&mut cur, &names)?;
                let (icol, s) = cur.int::<i64>("an integer")?;
                if s < 0 {
                    return cur.err(icol, "expected a non-negative integer");
                }
                cur.finish(&verb)?;
                if verb == "ext" {
                    Command::Ext { name: n, s }
                } else {
                    Command::Resolve { name: n, length: s }
                }
            }
            "strict" => {
                let r = need_ring(&cur, "strict")?;
                let source = bound_name(&mut cur, &names)?;
                let target = bound_name(&mut cur, &names)?;
                let rows = cur.bracket()?;
                for row in &rows {
                    for (c, e) in row {
                        check_operator(&r, line_no, *c, e, false)?;
                    }
                }
                cur.finish("strict")?;
                let rows = rows.into_iter().map(|r| r.into_iter().map(|(_, e)| e).collect()).collect();
                Command::Strict { source, target, rows }
            }
            "conormal" => {
                let r = need_ring(&cur, "conormal")?;
                let mut s = Vec::new();
                for (c, e) in cur.bracket()?.into_iter().flatten() {
                    match e.parse::<usize>() {
                        Ok(i) if i >= 1 && i <= r.d => s.push(i),
                        _ => return cur.err(c, format!("`{e}` is not a coordinate index in 1..{}", r.d)),
                    }
                }
                cur.finish("conormal")?;
                Command::Conormal(s)
            }
            "isotropy" | "lagrangian" => {
                need_ring(&cur, &verb)?;
                cur.skip_ws();
                let arg = if cur.pos < cur.chars.len() && cur.chars[cur.pos] == '[' {
                    IdealArg::Gens(cur.flat_bracket()?.into_iter().map(|(_, e)| e).collect())
                } else if verb == "lagrangian" {
                    IdealArg::Module(bound_name(&mut cur, &names)?)
                } else {
                    return cur.err(cur.col(), "expected `[`");
                };
                cur.finish(&verb)?;
                match (verb.as_str(), arg) {
                    ("isotropy", IdealArg::Gens(g)) => Command::Isotropy(g),
                    (_, a) => Command::Lagrangian(a),
                }
            }
            "relabel" => {
                need_ring(&cur, "relabel")?;
                let (mcol, m) = cur.key_value("m")?;
                let m: u32 = m.parse().or_else(|_| cur.err(mcol, format!("`{m}` is not a level")))?;
                let gens = cur.flat_bracket()?.into_iter().map(|(_, e)| e).collect();
                cur.finish("relabel")?;
                Command::Relabel { m, gens }
            }
            "fixtures" => {
                let (_, path) = cur.expect_word("a path")?;
                cur.finish("fixtures")?;
                Command::Fixtures(path)
            }
            other => return cur.err(vcol, format!("unknown verb `{other}`")),
        };
        lines.push(Line {
            line: line_no,
            command,
        });
    }
    Ok(Session { lines })
}

fn bound_name(cur: &mut Cursor, names: &HashSet<String>) -> Result<String, ParseError> {
    let (col, n) = cur.name()?;
    if names.contains(&n) {
        Ok(n)
    } else {
        cur.err(col, format!("unbound module name `{n}`"))
    }
}

fn int_entries(cur: &mut Cursor) -> Result<Vec<i64>, ParseError> {
    let mut out = Vec::new();
    for (c, e) in cur.bracket()?.into_iter().flatten() {
        match e.parse() {
            Ok(v) => out.push(v),
            Err(_) => return cur.err(c, format!("`{e}` is not an integer")),
        }
    }
    Ok(out)
}
