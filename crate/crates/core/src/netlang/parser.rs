use std::collections::HashMap;

use super::{Expr, NetworkSpec, VarDecl};
use crate::bits::Gate;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(usize),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Eq,
    Not,
    Op(Gate),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

fn lex(text: &str, line: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        let col = i + 1;
        if ch.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match ch {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            '=' => Tok::Eq,
            '^' => Tok::Op(Gate::Xor),
            '&' => Tok::Op(Gate::And),
            '|' => Tok::Op(Gate::Or),
            '~' => match chars.get(i + 1) {
                Some('^') => {
                    i += 1;
                    Tok::Op(Gate::Xnor)
                }
                Some('&') => {
                    i += 1;
                    Tok::Op(Gate::Nand)
                }
                Some('|') => {
                    i += 1;
                    Tok::Op(Gate::Nor)
                }
                _ => Tok::Not,
            },
            c if c.is_ascii_digit() => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..=i].iter().collect();
                Tok::Num(
                    digits
                        .parse()
                        .map_err(|_| syntax(line, col, format!("number `{digits}` out of range")))?,
                )
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i + 1 < chars.len() && (chars[i + 1].is_ascii_alphanumeric() || chars[i + 1] == '_') {
                    i += 1;
                }
                Tok::Ident(chars[start..=i].iter().collect())
            }
            other => return Err(syntax(line, col, format!("unexpected character {other:?}"))),
        };
        out.push(Token { tok, col });
        i += 1;
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.col)
    }

    fn next(&mut self) -> Option<&'a Tok> {
        let t = self.toks.get(self.pos).map(|t| &t.tok);
        self.pos += 1;
        t
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        syntax(self.line, self.col(), msg)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn ident(&mut self) -> Result<(String, usize)> {
        let col = self.col();
        match self.next() {
            Some(Tok::Ident(s)) => Ok((s.clone(), col)),
            _ => {
                self.pos -= 1;
                Err(self.error("expected identifier"))
            }
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }
}

/// Expression with the column of every variable occurrence, for error
/// reporting during name resolution.
type VarUse = (String, usize);

fn binary_level(g: Gate) -> u8 {
    match g {
        Gate::Or | Gate::Nor => 0,
        Gate::Xor | Gate::Xnor => 1,
        Gate::And | Gate::Nand => 2,
    }
}

fn parse_expr(cur: &mut Cursor, level: u8, uses: &mut Vec<VarUse>) -> Result<Expr> {
    if level > 2 {
        return parse_unary(cur, uses);
    }
    let mut lhs = parse_expr(cur, level + 1, uses)?;
    while let Some(Tok::Op(g)) = cur.peek() {
        if binary_level(*g) != level {
            break;
        }
        let g = *g;
        cur.pos += 1;
        let rhs = parse_expr(cur, level + 1, uses)?;
        lhs = Expr::gate(g, lhs, rhs);
    }
    Ok(lhs)
}

fn parse_unary(cur: &mut Cursor, uses: &mut Vec<VarUse>) -> Result<Expr> {
    match cur.peek() {
        Some(Tok::Not) => {
            cur.pos += 1;
            Ok(Expr::not(parse_unary(cur, uses)?))
        }
        Some(Tok::LParen) => {
            cur.pos += 1;
            let e = parse_expr(cur, 0, uses)?;
            cur.expect(Tok::RParen, "`)`")?;
            Ok(e)
        }
        Some(Tok::Ident(_)) => {
            let (name, col) = cur.ident()?;
            uses.push((name.clone(), col));
            Ok(Expr::Var(name))
        }
        _ => Err(cur.error("expected operand")),
    }
}

fn parse_decls(cur: &mut Cursor) -> Result<Vec<(VarDecl, usize)>> {
    let mut out = Vec::new();
    loop {
        let (name, col) = cur.ident()?;
        cur.expect(Tok::LBracket, "`[`")?;
        let width = match cur.next() {
            Some(Tok::Num(w)) if *w > 0 => *w,
            _ => {
                cur.pos -= 1;
                return Err(cur.error("expected positive width"));
            }
        };
        cur.expect(Tok::RBracket, "`]`")?;
        out.push((VarDecl { name, width }, col));
        if cur.at_end() {
            return Ok(out);
        }
        cur.expect(Tok::Comma, "`,` or end of line")?;
    }
}

struct PendingUpdate {
    target: String,
    line: usize,
    col: usize,
    expr: Expr,
    uses: Vec<VarUse>,
}

/// Parses a network description.
pub fn parse_network(text: &str) -> Result<NetworkSpec> {
    let mut states: Vec<VarDecl> = Vec::new();
    let mut inputs: Vec<VarDecl> = Vec::new();
    let mut declared: HashMap<String, (usize, bool)> = HashMap::new();
    let mut pending: Vec<PendingUpdate> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        let toks = lex(body, line)?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor {
            toks: &toks,
            pos: 0,
            line,
            end_col: body.trim_end().chars().count() + 1,
        };
        let (keyword, _) = cur.ident()?;
        match keyword.as_str() {
            "state" | "input" => {
                let is_state = keyword == "state";
                for (decl, _) in parse_decls(&mut cur)? {
                    if declared.contains_key(&decl.name) {
                        return Err(Error::DuplicateDeclaration {
                            name: decl.name,
                            line,
                        });
                    }
                    declared.insert(decl.name.clone(), (decl.width, is_state));
                    if is_state {
                        states.push(decl);
                    } else {
                        inputs.push(decl);
                    }
                }
            }
            "next" => {
                let (target, col) = cur.ident()?;
                cur.expect(Tok::Eq, "`=`")?;
                let mut uses = Vec::new();
                let expr = parse_expr(&mut cur, 0, &mut uses)?;
                if !cur.at_end() {
                    return Err(cur.error("unexpected token after expression"));
                }
                pending.push(PendingUpdate {
                    target,
                    line,
                    col,
                    expr,
                    uses,
                });
            }
            other => {
                return Err(syntax(
                    line,
                    toks[0].col,
                    format!("expected `state`, `input` or `next`, found `{other}`"),
                ))
            }
        }
    }

    let mut updates: Vec<Option<Expr>> = vec![None; states.len()];
    for upd in pending {
        let slot = states
            .iter()
            .position(|d| d.name == upd.target)
            .ok_or_else(|| match declared.get(&upd.target) {
                Some(_) => syntax(upd.line, upd.col, format!("`{}` is an input and cannot be updated", upd.target)),
                None => Error::UndeclaredVariable {
                    name: upd.target.clone(),
                    line: upd.line,
                    col: upd.col,
                },
            })?;
        let width = states[slot].width;
        for (name, col) in &upd.uses {
            match declared.get(name) {
                None => {
                    return Err(Error::UndeclaredVariable {
                        name: name.clone(),
                        line: upd.line,
                        col: *col,
                    })
                }
                Some((w, _)) if *w != width => {
                    return Err(Error::WidthMismatch {
                        target: upd.target.clone(),
                        line: upd.line,
                        detail: format!("`{name}` has width {w}, `{}` has width {width}", upd.target),
                    })
                }
                Some(_) => {}
            }
        }
        if updates[slot].is_some() {
            return Err(Error::DuplicateUpdate {
                name: upd.target,
                line: upd.line,
            });
        }
        updates[slot] = Some(upd.expr);
    }

    let updates = updates
        .into_iter()
        .zip(&states)
        .map(|(u, d)| u.ok_or_else(|| Error::MissingUpdate(d.name.clone())))
        .collect::<Result<Vec<_>>>()?;
    Ok(NetworkSpec {
        states,
        inputs,
        updates,
    })
}
