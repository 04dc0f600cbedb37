use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::One;

use crate::model::{ObjectiveSense, Sense, VarKind};
use crate::rational::Rational;

use super::lexer::{lex, Tok, Token};
use super::skeleton::{Affine, Skeleton, SkeletonRow};
use super::{ParseDiagnostic, Severity};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Section {
    Objective(ObjectiveSense),
    SubjectTo,
    Bounds,
    General,
    Binary,
    End,
}

impl Section {
    fn label(self) -> &'static str {
        match self {
            Section::Objective(ObjectiveSense::Minimize) => "Minimize",
            Section::Objective(ObjectiveSense::Maximize) => "Maximize",
            Section::SubjectTo => "Subject To",
            Section::Bounds => "Bounds",
            Section::General => "General",
            Section::Binary => "Binary",
            Section::End => "End",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ExprMode {
    Objective,
    Lhs,
    /// Ends at the first line break once at least one token was read.
    Rhs,
}

#[derive(Default)]
struct Expr {
    terms: Vec<(usize, Affine, usize, usize)>,
    constant: Affine,
    tokens: usize,
}

enum BoundValue {
    Finite(Affine),
    PosInf,
    NegInf,
}

type PResult<T> = Result<T, ParseDiagnostic>;

struct Parser<'t> {
    toks: &'t [Token],
    pos: usize,
    diags: Vec<ParseDiagnostic>,
    var_index: HashMap<String, usize>,
    var_names: Vec<String>,
    var_kinds: Vec<VarKind>,
    objective: Vec<Affine>,
    has_lower: Vec<bool>,
    free: Vec<bool>,
    rows: Vec<SkeletonRow>,
    bound_rows: Vec<SkeletonRow>,
    binary_rows: Vec<SkeletonRow>,
    row_names: HashSet<String>,
    eof_line: usize,
}

/// Parses LP text into a normalized skeleton. Syntax errors stop the parse;
/// semantic errors accumulate. The skeleton is returned iff no error was
/// reported.
pub(crate) fn parse_skeleton(text: &str, allow_params: bool, line_offset: usize) -> (Option<Skeleton>, Vec<ParseDiagnostic>) {
    let toks = match lex(text, allow_params, line_offset) {
        Ok(t) => t,
        Err(d) => return (None, vec![d]),
    };
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        diags: Vec::new(),
        var_index: HashMap::new(),
        var_names: Vec::new(),
        var_kinds: Vec::new(),
        objective: Vec::new(),
        has_lower: Vec::new(),
        free: Vec::new(),
        rows: Vec::new(),
        bound_rows: Vec::new(),
        binary_rows: Vec::new(),
        row_names: HashSet::new(),
        eof_line: line_offset + text.lines().count().max(1),
    };
    let outcome = p.document();
    if let Err(d) = outcome {
        p.diags.push(d);
    }
    let failed = p.diags.iter().any(|d| d.severity == Severity::Error);
    let diags = std::mem::take(&mut p.diags);
    let skeleton = (!failed).then(|| p.finish());
    (skeleton, diags)
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&'t Token> {
        self.toks.get(self.pos)
    }

    fn peek_at(&self, offset: usize) -> Option<&'t Token> {
        self.toks.get(self.pos + offset)
    }

    fn bump(&mut self) -> Option<&'t Token> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    fn error_at(&self, tok: Option<&Token>, message: impl Into<String>) -> ParseDiagnostic {
        let (line, column) = tok.map_or((self.eof_line, 1), |t| (t.line, t.col));
        ParseDiagnostic { line, column, severity: Severity::Error, message: message.into() }
    }

    fn warn(&mut self, line: usize, column: usize, message: impl Into<String>) {
        self.diags.push(ParseDiagnostic { line, column, severity: Severity::Warning, message: message.into() });
    }

    fn semantic_error(&mut self, line: usize, column: usize, message: impl Into<String>) {
        self.diags.push(ParseDiagnostic { line, column, severity: Severity::Error, message: message.into() });
    }

    /// Whether a keyword at `pos` may open a section: at the start of a line,
    /// or mid-line after a token that can end an expression. After a sign,
    /// relation or label colon the word is a variable.
    fn keyword_position(&self, pos: usize) -> bool {
        if pos == 0 || self.toks[pos - 1].line < self.toks[pos].line {
            return true;
        }
        !matches!(self.toks[pos - 1].tok, Tok::Plus | Tok::Minus | Tok::Rel(_) | Tok::Colon)
    }

    /// Section keyword at `pos` and the number of tokens it spans.
    fn section_at(&self, pos: usize) -> Option<(Section, usize)> {
        let tok = self.toks.get(pos)?;
        let Tok::Ident(word) = &tok.tok else { return None };
        if !self.keyword_position(pos) {
            return None;
        }
        let second = |expected: &str| match self.toks.get(pos + 1) {
            Some(Token { tok: Tok::Ident(w), line, .. }) => *line == tok.line && w.eq_ignore_ascii_case(expected),
            _ => false,
        };
        let found = match word.to_ascii_lowercase().as_str() {
            "minimize" | "minimise" | "minimum" | "min" => (Section::Objective(ObjectiveSense::Minimize), 1),
            "maximize" | "maximise" | "maximum" | "max" => (Section::Objective(ObjectiveSense::Maximize), 1),
            "subject" if second("to") => (Section::SubjectTo, 2),
            "such" if second("that") => (Section::SubjectTo, 2),
            "st" | "s.t." => (Section::SubjectTo, 1),
            "bounds" | "bound" => (Section::Bounds, 1),
            "general" | "generals" | "gen" | "integer" | "integers" => (Section::General, 1),
            "binary" | "binaries" | "bin" => (Section::Binary, 1),
            "end" => (Section::End, 1),
            _ => return None,
        };
        Some(found)
    }

    fn at_section(&self) -> bool {
        self.section_at(self.pos).is_some()
    }

    fn enter_section(&mut self, len: usize) {
        self.pos += len;
        if matches!(self.peek(), Some(Token { tok: Tok::Colon, .. })) {
            self.pos += 1;
        }
    }

    fn var(&mut self, name: &str) -> usize {
        if let Some(&j) = self.var_index.get(name) {
            return j;
        }
        let j = self.var_names.len();
        self.var_index.insert(name.to_string(), j);
        self.var_names.push(name.to_string());
        self.var_kinds.push(VarKind::Continuous);
        self.objective.push(Affine::default());
        self.has_lower.push(false);
        self.free.push(false);
        j
    }

    fn document(&mut self) -> PResult<()> {
        let Some((Section::Objective(sense), len)) = self.section_at(self.pos) else {
            return Err(self.error_at(self.peek(), "document must start with Minimize or Maximize"));
        };
        self.enter_section(len);
        self.objective_section(sense)?;

        let mut current = Section::Objective(sense);
        loop {
            let Some((section, len)) = self.section_at(self.pos) else {
                if self.peek().is_none() {
                    return Err(self.error_at(None, "missing End"));
                }
                return Err(self.error_at(self.peek(), "expected a section keyword"));
            };
            let allowed = match section {
                Section::SubjectTo => matches!(current, Section::Objective(_)),
                Section::Bounds => current == Section::SubjectTo,
                Section::General | Section::Binary | Section::End => {
                    matches!(current, Section::SubjectTo | Section::Bounds | Section::General | Section::Binary)
                }
                Section::Objective(_) => false,
            };
            if !allowed {
                let tok = self.peek();
                return Err(self.error_at(
                    tok,
                    format!("section `{}` is not allowed after `{}`", section.label(), current.label()),
                ));
            }
            self.enter_section(len);
            match section {
                Section::SubjectTo => self.rows_section()?,
                Section::Bounds => self.bounds_section()?,
                Section::General => self.kinds_section(false)?,
                Section::Binary => self.kinds_section(true)?,
                Section::End => {
                    if let Some(tok) = self.peek() {
                        return Err(self.error_at(Some(tok), "unexpected content after End"));
                    }
                    return Ok(());
                }
                Section::Objective(_) => unreachable!(),
            }
            current = section;
        }
    }

    fn label_follows(&self) -> bool {
        matches!(
            (self.peek().map(|t| &t.tok), self.peek_at(1).map(|t| &t.tok)),
            (Some(Tok::Ident(_)), Some(Tok::Colon))
        ) && !self.at_section()
    }

    fn objective_section(&mut self, _sense: ObjectiveSense) -> PResult<()> {
        if self.label_follows() {
            self.pos += 2;
        }
        let start = self.peek();
        let expr = self.expr(ExprMode::Objective)?;
        if !expr.constant.is_identically_zero() {
            let (line, col) = start.map_or((self.eof_line, 1), |t| (t.line, t.col));
            self.semantic_error(line, col, "constant terms in the objective are not supported");
        }
        for (j, coef, _, _) in expr.terms {
            self.objective[j].add_assign(&coef);
        }
        Ok(())
    }

    fn rows_section(&mut self) -> PResult<()> {
        while self.peek().is_some() && !self.at_section() {
            self.row()?;
        }
        Ok(())
    }

    fn row(&mut self) -> PResult<()> {
        let start = self.peek().expect("row start");
        let (line, col) = (start.line, start.col);
        let name = if self.label_follows() {
            let Tok::Ident(name) = &start.tok else { unreachable!() };
            self.pos += 2;
            Some(name.clone())
        } else {
            None
        };
        let lhs = self.expr(ExprMode::Lhs)?;
        let sense = match self.bump() {
            Some(Token { tok: Tok::Rel(s), .. }) => *s,
            other => return Err(self.error_at(other, "expected a relation (<=, >=, =, <, >)")),
        };
        let rhs = self.expr(ExprMode::Rhs)?;
        if rhs.tokens == 0 {
            return Err(self.error_at(self.peek(), "expected a right-hand side"));
        }
        if let Some(tok @ Token { tok: Tok::Rel(_), .. }) = self.peek() {
            return Err(self.error_at(Some(tok), "ranged constraints are not supported"));
        }

        let name = name.unwrap_or_else(|| format!("R{}", self.rows.len() + 1));
        if !self.row_names.insert(name.clone()) {
            self.warn(line, col, format!("duplicate constraint name `{name}`"));
        }

        // variables left, constants right
        let mut combined: BTreeMap<usize, (Affine, usize, usize)> = BTreeMap::new();
        let moved = rhs.terms.into_iter().map(|(j, a, l, c)| (j, a.negated(), l, c));
        for (j, coef, l, c) in lhs.terms.into_iter().chain(moved) {
            combined.entry(j).or_insert_with(|| (Affine::default(), l, c)).0.add_assign(&coef);
        }
        let mut coeffs = Vec::with_capacity(combined.len());
        for (j, (coef, l, c)) in combined {
            if coef.is_identically_zero() {
                let var = self.var_names[j].clone();
                self.warn(l, c, format!("zero coefficient for `{var}` in `{name}` dropped"));
            } else {
                coeffs.push((j, coef));
            }
        }
        if coeffs.is_empty() {
            self.semantic_error(line, col, format!("constraint `{name}` has no variables after normalization"));
        }
        let mut rhs_value = rhs.constant;
        rhs_value.add_assign(&lhs.constant.negated());
        self.rows.push(SkeletonRow { name, coeffs, sense, rhs: rhs_value });
        Ok(())
    }

    /// Whether the token at `pos` can serve as a variable right after a
    /// coefficient on `line`.
    fn variable_follows(&self, line: usize) -> bool {
        match self.peek() {
            Some(Token { tok: Tok::Ident(_), line: l, .. }) => {
                *l == line
                    && !self.at_section()
                    && !matches!(self.peek_at(1), Some(Token { tok: Tok::Colon, .. }))
            }
            _ => false,
        }
    }

    fn expr(&mut self, mode: ExprMode) -> PResult<Expr> {
        let mut expr = Expr::default();
        let mut last_line: Option<usize> = None;
        while let Some(tok) = self.peek() {
            if self.at_section() || matches!(tok.tok, Tok::Rel(_)) {
                break;
            }
            if mode == ExprMode::Rhs && last_line.is_some_and(|l| tok.line > l) {
                break;
            }
            let negative = match tok.tok {
                Tok::Plus => false,
                Tok::Minus => true,
                _ if expr.tokens == 0 => {
                    let (var, coef, line, col) = self.term()?;
                    self.push_term(&mut expr, var, coef, line, col);
                    last_line = Some(self.toks[self.pos - 1].line);
                    continue;
                }
                _ => break,
            };
            self.pos += 1;
            expr.tokens += 1;
            let (var, coef, line, col) = self.term()?;
            let coef = if negative { coef.negated() } else { coef };
            self.push_term(&mut expr, var, coef, line, col);
            last_line = Some(self.toks[self.pos - 1].line);
        }
        Ok(expr)
    }

    fn push_term(&mut self, expr: &mut Expr, var: Option<String>, coef: Affine, line: usize, col: usize) {
        expr.tokens += 1;
        match var {
            Some(name) => {
                let j = self.var(&name);
                expr.terms.push((j, coef, line, col));
            }
            None => expr.constant.add_assign(&coef),
        }
    }

    /// `[coeff] var | constant`
    fn term(&mut self) -> PResult<(Option<String>, Affine, usize, usize)> {
        let tok = self.peek();
        let Some(tok) = tok.filter(|_| !self.at_section()) else {
            return Err(self.error_at(tok, "expected a term"));
        };
        let coef = match &tok.tok {
            Tok::Number(v) => Affine::constant(v.clone()),
            Tok::Param(p) => Affine::param(p.clone()),
            Tok::Ident(name) => {
                if matches!(self.peek_at(1), Some(Token { tok: Tok::Colon, .. })) {
                    return Err(self.error_at(Some(tok), format!("unexpected label `{name}:`")));
                }
                self.pos += 1;
                return Ok((Some(name.clone()), Affine::constant(Rational::one()), tok.line, tok.col));
            }
            _ => return Err(self.error_at(Some(tok), "expected a term")),
        };
        self.pos += 1;
        if self.variable_follows(tok.line) {
            let Some(Token { tok: Tok::Ident(name), .. }) = self.bump() else { unreachable!() };
            return Ok((Some(name.clone()), coef, tok.line, tok.col));
        }
        Ok((None, coef, tok.line, tok.col))
    }

    fn bounds_section(&mut self) -> PResult<()> {
        while let Some(tok) = self.peek() {
            if self.at_section() {
                break;
            }
            match &tok.tok {
                Tok::Ident(name) if !is_infinity(name) => {
                    self.pos += 1;
                    let j = self.var(name);
                    match self.peek() {
                        Some(Token { tok: Tok::Ident(w), .. }) if w.eq_ignore_ascii_case("free") => {
                            self.pos += 1;
                            self.free[j] = true;
                        }
                        Some(Token { tok: Tok::Rel(s), .. }) => {
                            let s = *s;
                            self.pos += 1;
                            let value = self.bound_value()?;
                            self.apply_bound(j, s, value, tok)?;
                        }
                        other => return Err(self.error_at(other, "expected `free` or a relation after bound variable")),
                    }
                }
                Tok::Ident(_) | Tok::Plus | Tok::Minus | Tok::Number(_) | Tok::Param(_) => {
                    let value = self.bound_value()?;
                    let s = match self.bump() {
                        Some(Token { tok: Tok::Rel(s), .. }) => *s,
                        other => return Err(self.error_at(other, "expected a relation in bound")),
                    };
                    let j = match self.bump() {
                        Some(Token { tok: Tok::Ident(name), .. }) if !is_infinity(name) => self.var(name),
                        other => return Err(self.error_at(other, "expected a variable in bound")),
                    };
                    self.apply_bound(j, s.mirrored(), value, tok)?;
                    if let Some(Token { tok: Tok::Rel(s2), .. }) = self.peek() {
                        let s2 = *s2;
                        self.pos += 1;
                        let value = self.bound_value()?;
                        self.apply_bound(j, s2, value, tok)?;
                    }
                }
                _ => return Err(self.error_at(Some(tok), "expected a bound")),
            }
            if let Some(t @ Token { tok: Tok::Rel(_), .. }) = self.peek() {
                return Err(self.error_at(Some(t), "unexpected relation in bound"));
            }
        }
        Ok(())
    }

    fn bound_value(&mut self) -> PResult<BoundValue> {
        let negative = match self.peek().map(|t| &t.tok) {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let value = match self.bump() {
            Some(Token { tok: Tok::Number(v), .. }) => BoundValue::Finite(Affine::constant(v.clone())),
            Some(Token { tok: Tok::Param(p), .. }) => BoundValue::Finite(Affine::param(p.clone())),
            Some(Token { tok: Tok::Ident(w), .. }) if is_infinity(w) => BoundValue::PosInf,
            other => return Err(self.error_at(other, "expected a bound value")),
        };
        Ok(match (value, negative) {
            (BoundValue::Finite(a), true) => BoundValue::Finite(a.negated()),
            (BoundValue::PosInf, true) => BoundValue::NegInf,
            (v, _) => v,
        })
    }

    fn apply_bound(&mut self, j: usize, sense: Sense, value: BoundValue, at: &Token) -> PResult<()> {
        let lower_side = matches!(sense, Sense::Ge | Sense::Gt | Sense::Eq);
        match value {
            BoundValue::Finite(rhs) => {
                if lower_side {
                    self.has_lower[j] = true;
                }
                let suffix = match sense {
                    Sense::Eq => "fx",
                    Sense::Ge | Sense::Gt => "lo",
                    Sense::Le | Sense::Lt => "up",
                };
                let name = format!("{}_{suffix}", self.var_names[j]);
                let one = Affine::constant(Rational::one());
                self.bound_rows.push(SkeletonRow { name, coeffs: vec![(j, one)], sense, rhs });
            }
            BoundValue::NegInf if matches!(sense, Sense::Ge | Sense::Gt) => self.has_lower[j] = true,
            BoundValue::PosInf if matches!(sense, Sense::Le | Sense::Lt) => {}
            _ => {
                let var = &self.var_names[j];
                return Err(self.error_at(Some(at), format!("infeasible infinite bound on `{var}`")));
            }
        }
        Ok(())
    }

    fn kinds_section(&mut self, binary: bool) -> PResult<()> {
        while let Some(tok) = self.peek() {
            if self.at_section() {
                break;
            }
            let Tok::Ident(name) = &tok.tok else {
                return Err(self.error_at(Some(tok), "expected a variable name"));
            };
            self.pos += 1;
            let j = self.var(name);
            self.var_kinds[j] = VarKind::Integer;
            if binary {
                self.has_lower[j] = true;
                for (sense, value, suffix) in [(Sense::Ge, 0, "lo"), (Sense::Le, 1, "up")] {
                    self.binary_rows.push(SkeletonRow {
                        name: format!("{name}_bin_{suffix}"),
                        coeffs: vec![(j, Affine::constant(Rational::one()))],
                        sense,
                        rhs: Affine::constant(Rational::from_integer(value.into())),
                    });
                }
            }
        }
        Ok(())
    }

    fn finish(mut self) -> Skeleton {
        let mut rows = std::mem::take(&mut self.rows);
        rows.append(&mut self.bound_rows);
        rows.append(&mut self.binary_rows);
        for j in 0..self.var_names.len() {
            if !self.has_lower[j] && !self.free[j] {
                rows.push(SkeletonRow {
                    name: format!("{}_lo", self.var_names[j]),
                    coeffs: vec![(j, Affine::constant(Rational::one()))],
                    sense: Sense::Ge,
                    rhs: Affine::default(),
                });
            }
        }
        Skeleton {
            objective_sense: match self.toks.first() {
                Some(Token { tok: Tok::Ident(w), .. }) if w.to_ascii_lowercase().starts_with("max") => {
                    ObjectiveSense::Maximize
                }
                _ => ObjectiveSense::Minimize,
            },
            var_names: self.var_names,
            var_kinds: self.var_kinds,
            objective: self.objective,
            rows,
        }
    }
}

fn is_infinity(word: &str) -> bool {
    word.eq_ignore_ascii_case("inf") || word.eq_ignore_ascii_case("infinity")
}
