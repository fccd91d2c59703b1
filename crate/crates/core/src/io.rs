//! Plain-text formats. Blank lines and lines starting with `#` are
//! ignored everywhere; errors carry the 1-based line and column.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::forms::GameForm;
use crate::graph::{GameGraph, Owner};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::sp::RawInstance;
use crate::vform::VForm;
use crate::vplus::VPlusForm;

#[derive(Clone, Debug)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl Token<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn usize(&self) -> Result<usize> {
        self.text
            .parse()
            .map_err(|_| self.error(format!("expected a non-negative integer, found `{}`", self.text)))
    }

    fn rational(&self) -> Result<Rational> {
        parse_rational(self.text).map_err(|m| self.error(m))
    }
}

/// Content lines, each split into tokens.
struct Lines<'a> {
    lines: Vec<Vec<Token<'a>>>,
    next: usize,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let mut lines = Vec::new();
        let mut last_line = 0;
        for (i, raw) in text.lines().enumerate() {
            last_line = i + 1;
            let trimmed = raw.trim_start();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut tokens = Vec::new();
            let mut start = None;
            for (j, ch) in raw.char_indices().chain(std::iter::once((raw.len(), ' '))) {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(j),
                    (true, Some(s)) => {
                        tokens.push(Token {
                            text: &raw[s..j],
                            line: i + 1,
                            column: raw[..s].chars().count() + 1,
                        });
                        start = None;
                    }
                    _ => {}
                }
            }
            lines.push(tokens);
        }
        Lines { lines, next: 0, last_line }
    }

    fn eof_error(&self, what: &str) -> Error {
        Error::Parse {
            line: self.last_line + 1,
            column: 1,
            message: format!("unexpected end of input, expected {what}"),
        }
    }

    fn line(&mut self, what: &str) -> Result<&[Token<'a>]> {
        if self.next >= self.lines.len() {
            return Err(self.eof_error(what));
        }
        self.next += 1;
        Ok(&self.lines[self.next - 1])
    }

    /// Next line, which must have exactly `n` tokens.
    fn exact(&mut self, n: usize, what: &str) -> Result<Vec<Token<'a>>> {
        let line = self.line(what)?.to_vec();
        if line.len() != n {
            let t = line.get(n).unwrap_or(&line[line.len() - 1]);
            return Err(t.error(format!("expected {n} fields for {what}, found {}", line.len())));
        }
        Ok(line)
    }

    fn is_done(&self) -> bool {
        self.next >= self.lines.len()
    }

    fn finish(&self) -> Result<()> {
        match self.lines.get(self.next) {
            Some(line) => Err(line[0].error("unexpected trailing input")),
            None => Ok(()),
        }
    }
}

fn header3(lines: &mut Lines<'_>, what: &str) -> Result<(usize, usize, usize, usize)> {
    let h = lines.exact(3, what)?;
    Ok((h[0].usize()?, h[1].usize()?, h[2].usize()?, h[0].line))
}

fn at_line(line: usize, e: Error) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => Error::Parse {
            line,
            column: 1,
            message: other.to_string(),
        },
    }
}

/// `X Y O`, then `X` rows of `Y` outcome indices.
pub fn parse_form(text: &str) -> Result<GameForm> {
    let mut lines = Lines::new(text);
    let (rows, cols, outcomes, line) = header3(&mut lines, "the header `X Y O`")?;
    let mut table = Vec::with_capacity(rows * cols);
    for _ in 0..rows {
        for t in lines.exact(cols, "a table row")? {
            let o = t.usize()?;
            if o >= outcomes {
                return Err(t.error(format!("outcome {o} outside 0..{outcomes}")));
            }
            table.push(o);
        }
    }
    lines.finish()?;
    GameForm::from_flat(rows, cols, outcomes, table).map_err(|e| match e {
        Error::InvalidForm(_) => e,
        other => at_line(line, other),
    })
}

pub fn write_form(g: &GameForm) -> String {
    let mut s = format!("{} {} {}\n", g.rows(), g.cols(), g.num_outcomes());
    for x in 0..g.rows() {
        let row: Vec<String> = g.row(x).iter().map(|o| o.to_string()).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

/// Two lines of `num_outcomes` rationals: Alice's rewards, then Bob's.
pub fn parse_rewards(text: &str, num_outcomes: usize) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let mut lines = Lines::new(text);
    let a = lines.exact(num_outcomes, "Alice's rewards")?;
    let a = a.iter().map(Token::rational).collect::<Result<Vec<_>>>()?;
    let b = lines.exact(num_outcomes, "Bob's rewards")?;
    let b = b.iter().map(Token::rational).collect::<Result<Vec<_>>>()?;
    lines.finish()?;
    Ok((a, b))
}

pub fn write_vector(v: &[Rational]) -> String {
    v.iter().map(format_rational).collect::<Vec<_>>().join(" ")
}

pub fn write_rewards(a: &[Rational], b: &[Rational]) -> String {
    format!("{}\n{}\n", write_vector(a), write_vector(b))
}

fn parse_owner(t: &Token<'_>) -> Result<Owner> {
    match t.text {
        "A" => Ok(Owner::ALICE),
        "B" => Ok(Owner::BOB),
        "T" => Ok(Owner::Terminal),
        s => match s.strip_prefix('P').map(str::parse::<usize>) {
            Some(Ok(p)) => Ok(Owner::Player(p)),
            _ => Err(t.error(format!("expected an owner A, B, T or P<k>, found `{s}`"))),
        },
    }
}

fn owner_token(o: Owner) -> String {
    match o {
        Owner::Player(0) => "A".into(),
        Owner::Player(1) => "B".into(),
        Owner::Player(p) => format!("P{p}"),
        Owner::Terminal => "T".into(),
    }
}

struct RawGraph {
    owners: Vec<Owner>,
    edges: Vec<(usize, usize)>,
    start: usize,
    header_line: usize,
}

fn parse_raw_graph(lines: &mut Lines<'_>) -> Result<RawGraph> {
    let (n, m, start, header_line) = header3(lines, "the header `n m v0`")?;
    let mut owners = Vec::with_capacity(n);
    for _ in 0..n {
        owners.push(parse_owner(&lines.exact(1, "an owner")?[0])?);
    }
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let e = lines.exact(2, "an edge `from to`")?;
        let (a, b) = (e[0].usize()?, e[1].usize()?);
        for (t, v) in [(&e[0], a), (&e[1], b)] {
            if v >= n {
                return Err(t.error(format!("vertex {v} outside 0..{n}")));
            }
        }
        edges.push((a, b));
    }
    Ok(RawGraph {
        owners,
        edges,
        start,
        header_line,
    })
}

/// `n m v0`, then `n` owner lines (`A`, `B`, `T` or `P<k>`), then `m`
/// edge lines `from to`.
pub fn parse_graph(text: &str) -> Result<GameGraph> {
    let mut lines = Lines::new(text);
    let raw = parse_raw_graph(&mut lines)?;
    lines.finish()?;
    GameGraph::new(raw.owners, raw.edges, raw.start).map_err(|e| at_line(raw.header_line, e))
}

fn write_graph_parts(owners: &[Owner], edges: &[(usize, usize)], start: usize) -> String {
    let mut s = format!("{} {} {}\n", owners.len(), edges.len(), start);
    for &o in owners {
        s.push_str(&owner_token(o));
        s.push('\n');
    }
    for &(a, b) in edges {
        let _ = writeln!(s, "{a} {b}");
    }
    s
}

pub fn write_graph(g: &GameGraph) -> String {
    write_graph_parts(g.owners(), g.edges(), g.start())
}

/// `X Y m`, then `X·Y` lines of `m` rationals in row-major order.
pub fn parse_vform(text: &str) -> Result<VForm> {
    let mut lines = Lines::new(text);
    let (rows, cols, dim, line) = header3(&mut lines, "the header `X Y m`")?;
    let mut table = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        let v = lines.exact(dim, "a vector")?;
        table.push(v.iter().map(Token::rational).collect::<Result<Vec<_>>>()?);
    }
    lines.finish()?;
    VForm::new(rows, cols, dim, table).map_err(|e| match e {
        Error::InvalidVectorForm(_) => e,
        other => at_line(line, other),
    })
}

pub fn write_vform(g: &VForm) -> String {
    let mut s = format!("{} {} {}\n", g.rows(), g.cols(), g.dim());
    for x in 0..g.rows() {
        for y in 0..g.cols() {
            s.push_str(&write_vector(g.vector(x, y)));
            s.push('\n');
        }
    }
    s
}

/// Like the v-form format, but a cell may be the single token `INF`.
pub fn parse_vplus(text: &str) -> Result<VPlusForm> {
    let mut lines = Lines::new(text);
    let (rows, cols, dim, line) = header3(&mut lines, "the header `X Y m`")?;
    let mut table = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        let v = lines.line("a vector or INF")?.to_vec();
        if v.len() == 1 && v[0].text == "INF" {
            table.push(None);
            continue;
        }
        if v.len() != dim {
            return Err(v[0].error(format!("expected {dim} entries or INF, found {}", v.len())));
        }
        table.push(Some(v.iter().map(Token::rational).collect::<Result<Vec<_>>>()?));
    }
    lines.finish()?;
    VPlusForm::new(rows, cols, dim, table).map_err(|e| match e {
        Error::InvalidVectorForm(_) => e,
        other => at_line(line, other),
    })
}

pub fn write_vplus(g: &VPlusForm) -> String {
    let mut s = format!("{} {} {}\n", g.rows(), g.cols(), g.dim());
    for x in 0..g.rows() {
        for y in 0..g.cols() {
            match g.cell(x, y) {
                Some(w) => s.push_str(&write_vector(&g.vectors()[w])),
                None => s.push_str("INF"),
            }
            s.push('\n');
        }
    }
    s
}

/// `n` cost rationals, one line.
pub fn parse_cost_vector(text: &str, n: usize) -> Result<Vec<Rational>> {
    let mut lines = Lines::new(text);
    let v = lines.exact(n, "a cost vector")?;
    let v = v.iter().map(Token::rational).collect::<Result<Vec<_>>>()?;
    lines.finish()?;
    Ok(v)
}

/// Digraph format with the start as `s` and the single `T` position as
/// `t`, followed by cost lines `edge player cost`, one per edge and player.
/// Players are `A`, `B` or indices.
pub fn parse_instance(text: &str) -> Result<RawInstance> {
    let mut lines = Lines::new(text);
    let raw = parse_raw_graph(&mut lines)?;
    let n = raw.owners.len();
    if raw.start >= n {
        return Err(Error::Parse {
            line: raw.header_line,
            column: 1,
            message: format!("source {} outside 0..{n}", raw.start),
        });
    }
    let terminals: Vec<usize> = (0..n).filter(|&v| raw.owners[v] == Owner::Terminal).collect();
    if terminals.len() != 1 {
        return Err(Error::Parse {
            line: raw.header_line,
            column: 1,
            message: format!("exactly one T position expected, found {}", terminals.len()),
        });
    }
    let players = raw
        .owners
        .iter()
        .filter_map(|o| o.player())
        .max()
        .map_or(2, |p| (p + 1).max(2));
    let m = raw.edges.len();
    let mut costs: Vec<Vec<Option<Rational>>> = vec![vec![None; m]; players];
    while !lines.is_done() {
        let c = lines.exact(3, "a cost line `edge player cost`")?;
        let e = c[0].usize()?;
        if e >= m {
            return Err(c[0].error(format!("edge {e} outside 0..{m}")));
        }
        let p = match c[1].text {
            "A" => 0,
            "B" => 1,
            _ => c[1].usize()?,
        };
        if p >= players {
            return Err(c[1].error(format!("player {p} outside 0..{players}")));
        }
        if costs[p][e].is_some() {
            return Err(c[0].error(format!("duplicate cost for edge {e}, player {p}")));
        }
        costs[p][e] = Some(c[2].rational()?);
    }
    let costs = costs
        .into_iter()
        .enumerate()
        .map(|(p, row)| {
            row.into_iter()
                .enumerate()
                .map(|(e, c)| {
                    c.ok_or_else(|| Error::Parse {
                        line: lines.last_line + 1,
                        column: 1,
                        message: format!("missing cost for edge {e}, player {p}"),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RawInstance {
        owners: raw.owners,
        edges: raw.edges,
        s: raw.start,
        t: terminals[0],
        costs,
    })
}

pub fn write_instance(inst: &RawInstance) -> String {
    let mut s = write_graph_parts(&inst.owners, &inst.edges, inst.s);
    for (p, row) in inst.costs.iter().enumerate() {
        let player = owner_token(Owner::Player(p));
        for (e, c) in row.iter().enumerate() {
            let _ = writeln!(s, "{e} {player} {}", format_rational(c));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::corpus;
    use crate::rational::{frac, int};

    #[test]
    fn golden_round_trips() {
        for g in corpus::golden() {
            let text = write_form(&g);
            let back = parse_form(&text).unwrap();
            assert_eq!(back.to_rows(), g.to_rows());
            assert_eq!(write_form(&back), text);
        }
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_form("# g1\n\n2 2 3\n0 0\n 1 2\n").unwrap();
        assert_eq!(g.to_rows(), corpus::g1().to_rows());
    }

    #[test]
    fn errors_carry_positions() {
        match parse_form("2 2 3\n0 1\n0 x\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 3)),
            other => panic!("{other:?}"),
        }
        match parse_form("2 2 3\n0 1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        // non-surjective tables are a form error, not a syntax error
        assert!(matches!(parse_form("1 2 3\n0 1\n"), Err(Error::InvalidForm(_))));
        match parse_rewards("3/0 1\n1 1\n", 2) {
            Err(Error::Parse { line, column, message }) => {
                assert_eq!((line, column), (1, 1));
                assert!(message.contains("zero denominator"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn graph_round_trip() {
        let text = "3 3 0\nA\nB\nT\n0 1\n1 0\n1 2\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(write_graph(&g), text);
        assert!(matches!(parse_graph("2 1 0\nA\nX\n0 1\n"), Err(Error::Parse { line: 3, column: 1, .. })));
        assert!(matches!(parse_graph("2 1 0\nA\nT\n0 5\n"), Err(Error::Parse { line: 4, column: 3, .. })));
    }

    #[test]
    fn vform_round_trip() {
        let text = "1 2 2\n1 0\n0 1/2\n";
        let g = parse_vform(text).unwrap();
        assert_eq!(g.vector(0, 1), &[int(0), frac(1, 2)]);
        assert_eq!(write_vform(&g), text);
    }

    #[test]
    fn vplus_with_inf() {
        let text = "1 2 2\n1 0\nINF\n";
        let g = parse_vplus(text).unwrap();
        assert_eq!(g.cell(0, 1), None);
        assert_eq!(write_vplus(&g), text);
        assert!(parse_vplus("1 1 2\n0 0\n").is_err());
    }

    #[test]
    fn instance_round_trip() {
        let text = "3 3 0\nA\nB\nT\n0 1\n0 2\n1 2\n0 A 1\n1 A 2\n2 A 1/2\n0 B 3\n1 B 1\n2 B 1\n";
        let raw = parse_instance(text).unwrap();
        assert_eq!(raw.t, 2);
        assert_eq!(raw.costs[0][2], frac(1, 2));
        assert_eq!(write_instance(&raw), text);
        let missing = "3 3 0\nA\nB\nT\n0 1\n0 2\n1 2\n0 A 1\n";
        assert!(matches!(parse_instance(missing), Err(Error::Parse { .. })));
    }
}
