//! Text notation for trees, presentations, sequences, and ordinals.
//!
//! ```text
//! expr    := fin | seq | spine | sord | comb | sf
//! fin     := '(' fin* ')'
//! seq     := 'seq' '(' 'prefix' ':' '[' fin,* ']' ';' 'cycle' ':' '[' fin,* ']' ')'
//! spine   := 'spine' '[' ('attach'|'glue') ']'
//!            '(' 'prefix' ':' '[' slot,* ']' ';' 'cycle' ':' '[' slot,* ']' ')'
//! slot    := '_' | expr
//! sord    := 'S' '(' ordinal ')'
//! comb    := ('comb'|'hairycomb') '(' (int|'w') ')'
//! sf      := 'sf' '(' expr ',' natspec ')'
//! natspec := 'ppow' '(' int ')'
//!          | 'natseq' '(' 'prefix' ':' '[' int,* ']' ';' 'cycle' ':' '[' int,* ']' ')'
//! ordinal := term ('+' term)* ;  term := 'w' ('^' int)? ('*' int)? | int
//! ```
//!
//! Whitespace is insignificant. `_` marks an undecorated spine slot.
//! Printing always emits the canonical spelling, so parsing a printed
//! expression gives the expression back exactly.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::family::{s_f, NatSeqSpec};
use crate::finite::FiniteTree;
use crate::ordinal::OrdCNF;
use crate::seq::EPSeq;
use crate::spined::{make_comb, CombSize, Mode, SpinedTree};

/// Parsed syntax, one constructor per grammar production.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Fin(FiniteTree),
    Seq { prefix: Vec<FiniteTree>, cycle: Vec<FiniteTree> },
    Spine { mode: Mode, prefix: Vec<Option<Expr>>, cycle: Vec<Option<Expr>> },
    SOrd(OrdCNF),
    Comb { size: CombSize, hairy: bool },
    Sf { base: Box<Expr>, lengths: NatSeqSpec },
}

impl Expr {
    /// The presentation this expression denotes.  Sequence expressions
    /// denote sequences, not trees, and are rejected; `sf` checks its
    /// base's side conditions.
    pub fn to_spined(&self) -> Result<SpinedTree> {
        match self {
            Expr::Fin(t) => Ok(SpinedTree::Fin(t.clone())),
            Expr::Seq { .. } => {
                Err(Error::invalid("a sequence expression does not denote a tree"))
            }
            Expr::Spine { mode, prefix, cycle } => {
                let conv = |slots: &[Option<Expr>]| -> Result<Vec<Option<SpinedTree>>> {
                    slots.iter().map(|s| s.as_ref().map(|e| e.to_spined()).transpose()).collect()
                };
                SpinedTree::spine(*mode, conv(prefix)?, conv(cycle)?)
            }
            Expr::SOrd(a) => Ok(SpinedTree::SOrd(a.clone())),
            Expr::Comb { size, hairy } => make_comb(*size, *hairy),
            Expr::Sf { base, lengths } => s_f(&base.to_spined()?, lengths.clone()),
        }
    }

    /// The finite tree this expression denotes, if it is one.
    pub fn to_finite(&self) -> Result<FiniteTree> {
        match self {
            Expr::Fin(t) => Ok(t.clone()),
            _ => Err(Error::invalid("expected a finite tree expression")),
        }
    }

    /// The tree sequence this expression denotes, if it is one.
    pub fn to_epseq(&self) -> Result<EPSeq> {
        match self {
            Expr::Seq { prefix, cycle } => EPSeq::new(prefix.clone(), cycle.clone()),
            _ => Err(Error::invalid("expected a sequence expression")),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    p.expect_end()?;
    Ok(e)
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Expr> {
        parse(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LPar,
    RPar,
    LBrack,
    RBrack,
    Comma,
    Semi,
    Colon,
    Plus,
    Star,
    Caret,
    Blank,
    Int(usize),
    Word(String),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::LPar => f.write_str("'('"),
            Tok::RPar => f.write_str("')'"),
            Tok::LBrack => f.write_str("'['"),
            Tok::RBrack => f.write_str("']'"),
            Tok::Comma => f.write_str("','"),
            Tok::Semi => f.write_str("';'"),
            Tok::Colon => f.write_str("':'"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Caret => f.write_str("'^'"),
            Tok::Blank => f.write_str("'_'"),
            Tok::Int(n) => write!(f, "'{n}'"),
            Tok::Word(w) => write!(f, "'{w}'"),
        }
    }
}

struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let cs: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        let (tl, tc) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LPar),
            ')' => Some(Tok::RPar),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            ':' => Some(Tok::Colon),
            '+' => Some(Tok::Plus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '_' => Some(Tok::Blank),
            _ => None,
        };
        if let Some(tok) = single {
            toks.push(Token { tok, line: tl, col: tc });
            i += 1;
            col += 1;
        } else if c.is_ascii_digit() {
            let mut n: usize = 0;
            while i < cs.len() && cs[i].is_ascii_digit() {
                let d = cs[i].to_digit(10).unwrap() as usize;
                n = n.checked_mul(10).and_then(|n| n.checked_add(d)).ok_or(Error::Parse {
                    line: tl,
                    col: tc,
                    msg: "integer literal too large".into(),
                })?;
                i += 1;
                col += 1;
            }
            toks.push(Token { tok: Tok::Int(n), line: tl, col: tc });
        } else if c.is_ascii_alphabetic() {
            let mut w = String::new();
            while i < cs.len() && cs[i].is_ascii_alphabetic() {
                w.push(cs[i]);
                i += 1;
                col += 1;
            }
            toks.push(Token { tok: Tok::Word(w), line: tl, col: tc });
        } else {
            return Err(Error::Parse {
                line: tl,
                col: tc,
                msg: format!("unexpected character '{c}'"),
            });
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn err_here(&self, msg: impl Into<String>) -> Error {
        let (line, col) = match self.toks.get(self.pos) {
            Some(t) => (t.line, t.col),
            None => self
                .toks
                .last()
                .map(|t| (t.line, t.col + 1))
                .unwrap_or((1, 1)),
        };
        Error::Parse { line, col, msg: msg.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn next(&mut self, what: &str) -> Result<&Tok> {
        let t = self
            .toks
            .get(self.pos)
            .ok_or_else(|| self.err_here(format!("expected {what}, found end of input")))?;
        self.pos += 1;
        Ok(&t.tok)
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        match self.toks.get(self.pos) {
            Some(t) if t.tok == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.err_here(format!("expected {want}, found {}", t.tok))),
            None => Err(self.err_here(format!("expected {want}, found end of input"))),
        }
    }

    fn expect_word(&mut self, want: &str) -> Result<()> {
        match self.next(&format!("'{want}'"))? {
            Tok::Word(w) if w == want => Ok(()),
            t => {
                let msg = format!("expected '{want}', found {t}");
                self.pos -= 1;
                Err(self.err_here(msg))
            }
        }
    }

    fn expect_end(&self) -> Result<()> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.err_here("trailing input after expression"))
        }
    }

    fn int(&mut self, what: &str) -> Result<usize> {
        match self.next(what)? {
            Tok::Int(n) => Ok(*n),
            t => {
                let msg = format!("expected {what}, found {t}");
                self.pos -= 1;
                Err(self.err_here(msg))
            }
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Tok::LPar) => Ok(Expr::Fin(self.fin()?)),
            Some(Tok::Word(w)) => match w.as_str() {
                "seq" => self.seq(),
                "spine" => self.spine(),
                "S" => self.sord(),
                "comb" => self.comb(false),
                "hairycomb" => self.comb(true),
                "sf" => self.sf(),
                other => {
                    Err(self.err_here(format!("unknown expression head '{other}'")))
                }
            },
            Some(t) => {
                let msg = format!("expected an expression, found {t}");
                Err(self.err_here(msg))
            }
            None => Err(self.err_here("expected an expression, found end of input")),
        }
    }

    fn fin(&mut self) -> Result<FiniteTree> {
        self.expect(Tok::LPar)?;
        let mut kids = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::LPar) => kids.push(self.fin()?),
                Some(Tok::RPar) => {
                    self.pos += 1;
                    return Ok(FiniteTree::node(kids));
                }
                _ => return Err(self.err_here("expected '(' or ')' in finite tree")),
            }
        }
    }

    /// `prefix:[...]; cycle:[...]` with `item` for the bracket contents.
    fn two_lists<T>(
        &mut self,
        mut item: impl FnMut(&mut Self) -> Result<T>,
    ) -> Result<(Vec<T>, Vec<T>)> {
        self.expect(Tok::LPar)?;
        self.expect_word("prefix")?;
        self.expect(Tok::Colon)?;
        let prefix = self.list(&mut item)?;
        self.expect(Tok::Semi)?;
        self.expect_word("cycle")?;
        self.expect(Tok::Colon)?;
        let cycle = self.list(&mut item)?;
        self.expect(Tok::RPar)?;
        Ok((prefix, cycle))
    }

    fn list<T>(&mut self, item: &mut impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        self.expect(Tok::LBrack)?;
        let mut out = Vec::new();
        if self.peek() == Some(&Tok::RBrack) {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            match self.peek() {
                Some(Tok::Comma) => self.pos += 1,
                Some(Tok::RBrack) => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.err_here("expected ',' or ']' in list")),
            }
        }
    }

    fn seq(&mut self) -> Result<Expr> {
        self.expect_word("seq")?;
        let (prefix, cycle) = self.two_lists(|p| p.fin())?;
        Ok(Expr::Seq { prefix, cycle })
    }

    fn spine(&mut self) -> Result<Expr> {
        self.expect_word("spine")?;
        self.expect(Tok::LBrack)?;
        let mode = match self.next("'attach' or 'glue'")? {
            Tok::Word(w) if w == "attach" => Mode::Attach,
            Tok::Word(w) if w == "glue" => Mode::Glue,
            t => {
                let msg = format!("expected 'attach' or 'glue', found {t}");
                self.pos -= 1;
                return Err(self.err_here(msg));
            }
        };
        self.expect(Tok::RBrack)?;
        let (prefix, cycle) = self.two_lists(|p| {
            if p.peek() == Some(&Tok::Blank) {
                p.pos += 1;
                Ok(None)
            } else {
                p.expr().map(Some)
            }
        })?;
        Ok(Expr::Spine { mode, prefix, cycle })
    }

    fn sord(&mut self) -> Result<Expr> {
        self.expect_word("S")?;
        self.expect(Tok::LPar)?;
        let a = self.ordinal()?;
        self.expect(Tok::RPar)?;
        Ok(Expr::SOrd(a))
    }

    fn ordinal(&mut self) -> Result<OrdCNF> {
        let at = self.pos;
        let mut terms: Vec<(u32, u32)> = Vec::new();
        loop {
            terms.push(self.ord_term()?);
            match self.peek() {
                Some(Tok::Plus) => self.pos += 1,
                _ => break,
            }
        }
        if terms == [(0, 0)] {
            return Ok(OrdCNF::zero());
        }
        OrdCNF::from_terms(terms).map_err(|e| {
            self.pos = at;
            self.err_here(format!("bad ordinal: {e}"))
        })
    }

    fn ord_term(&mut self) -> Result<(u32, u32)> {
        let small = |p: &Self, n: usize| -> Result<u32> {
            u32::try_from(n).map_err(|_| p.err_here("ordinal component too large"))
        };
        match self.peek() {
            Some(Tok::Word(w)) if w == "w" => {
                self.pos += 1;
                let exp = if self.peek() == Some(&Tok::Caret) {
                    self.pos += 1;
                    let n = self.int("an exponent")?;
                    small(self, n)?
                } else {
                    1
                };
                let coeff = if self.peek() == Some(&Tok::Star) {
                    self.pos += 1;
                    let n = self.int("a coefficient")?;
                    small(self, n)?
                } else {
                    1
                };
                Ok((exp, coeff))
            }
            Some(&Tok::Int(n)) => {
                let c = small(self, n)?;
                self.pos += 1;
                Ok((0, c))
            }
            _ => Err(self.err_here("expected an ordinal term")),
        }
    }

    fn comb(&mut self, hairy: bool) -> Result<Expr> {
        self.expect_word(if hairy { "hairycomb" } else { "comb" })?;
        self.expect(Tok::LPar)?;
        let size = match self.next("a width or 'w'")? {
            Tok::Word(w) if w == "w" => CombSize::Omega,
            &Tok::Int(n) => CombSize::Finite(n),
            t => {
                let msg = format!("expected a width or 'w', found {t}");
                self.pos -= 1;
                return Err(self.err_here(msg));
            }
        };
        self.expect(Tok::RPar)?;
        // reject widths the constructors refuse, at the input position
        make_comb(size, hairy).map_err(|e| self.err_here(format!("{e}")))?;
        Ok(Expr::Comb { size, hairy })
    }

    fn sf(&mut self) -> Result<Expr> {
        self.expect_word("sf")?;
        self.expect(Tok::LPar)?;
        let base = self.expr()?;
        self.expect(Tok::Comma)?;
        let lengths = self.natspec()?;
        self.expect(Tok::RPar)?;
        Ok(Expr::Sf { base: Box::new(base), lengths })
    }

    fn natspec(&mut self) -> Result<NatSeqSpec> {
        match self.peek() {
            Some(Tok::Word(w)) if w == "ppow" => {
                self.pos += 1;
                self.expect(Tok::LPar)?;
                let at = self.pos;
                let p = self.int("a prime")?;
                self.expect(Tok::RPar)?;
                NatSeqSpec::prime_powers(p).map_err(|e| {
                    self.pos = at;
                    self.err_here(format!("{e}"))
                })
            }
            Some(Tok::Word(w)) if w == "natseq" => {
                self.pos += 1;
                let at = self.pos;
                let (prefix, cycle) = self.two_lists(|p| p.int("a length"))?;
                NatSeqSpec::periodic(prefix, cycle).map_err(|e| {
                    self.pos = at;
                    self.err_here(format!("{e}"))
                })
            }
            _ => Err(self.err_here("expected 'ppow' or 'natseq'")),
        }
    }
}

fn write_items<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, it) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{it}")?;
    }
    Ok(())
}

struct SlotDisp<'a>(&'a Option<Expr>);

impl fmt::Display for SlotDisp<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            None => f.write_str("_"),
            Some(e) => write!(f, "{e}"),
        }
    }
}

fn write_natspec(f: &mut fmt::Formatter<'_>, spec: &NatSeqSpec) -> fmt::Result {
    match spec {
        NatSeqSpec::PrimePowers { p } => write!(f, "ppow({p})"),
        NatSeqSpec::PeriodicNat { prefix, cycle } => {
            f.write_str("natseq(prefix:[")?;
            write_items(f, prefix)?;
            f.write_str("]; cycle:[")?;
            write_items(f, cycle)?;
            f.write_str("])")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Fin(t) => write!(f, "{t}"),
            Expr::Seq { prefix, cycle } => {
                f.write_str("seq(prefix:[")?;
                write_items(f, prefix)?;
                f.write_str("]; cycle:[")?;
                write_items(f, cycle)?;
                f.write_str("])")
            }
            Expr::Spine { mode, prefix, cycle } => {
                let m = match mode {
                    Mode::Attach => "attach",
                    Mode::Glue => "glue",
                };
                write!(f, "spine[{m}](prefix:[")?;
                let ps: Vec<SlotDisp> = prefix.iter().map(SlotDisp).collect();
                write_items(f, &ps)?;
                f.write_str("]; cycle:[")?;
                let cs: Vec<SlotDisp> = cycle.iter().map(SlotDisp).collect();
                write_items(f, &cs)?;
                f.write_str("])")
            }
            Expr::SOrd(a) => write!(f, "S({a})"),
            Expr::Comb { size, hairy } => {
                let head = if *hairy { "hairycomb" } else { "comb" };
                match size {
                    CombSize::Finite(n) => write!(f, "{head}({n})"),
                    CombSize::Omega => write!(f, "{head}(w)"),
                }
            }
            Expr::Sf { base, lengths } => {
                write!(f, "sf({base}, ")?;
                write_natspec(f, lengths)?;
                f.write_str(")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round(text: &str) -> Expr {
        let e = parse(text).unwrap();
        assert_eq!(parse(&e.to_string()).unwrap(), e);
        e
    }

    #[test]
    fn finite_trees() {
        let e = round("(()())");
        assert_eq!(e, Expr::Fin(FiniteTree::star(2)));
        assert_eq!(round("()"), Expr::Fin(FiniteTree::leaf()));
        // whitespace is free
        assert_eq!(parse(" ( ( ) ( ) ) ").unwrap(), e);
    }

    #[test]
    fn ordinals() {
        let e = round("S(w*2+1)");
        assert_eq!(e, Expr::SOrd(OrdCNF::from_terms(vec![(1, 2), (0, 1)]).unwrap()));
        assert_eq!(round("S(0)"), Expr::SOrd(OrdCNF::zero()));
        assert_eq!(round("S(w^2)").to_string(), "S(w^2)");
        // explicit unit coefficients parse and reprint canonically
        assert_eq!(parse("S(w^2*1)").unwrap().to_string(), "S(w^2)");
        assert!(parse("S(w+w)").is_err());
        assert!(parse("S(1+w)").is_err());
    }

    #[test]
    fn combs() {
        assert_eq!(round("comb(4)"), Expr::Comb { size: CombSize::Finite(4), hairy: false });
        assert_eq!(round("hairycomb(w)"), Expr::Comb { size: CombSize::Omega, hairy: true });
        assert!(parse("comb(1)").is_err());
        assert!(parse("hairycomb(0)").is_err());
    }

    #[test]
    fn spines_and_slots() {
        let e = round("spine[glue](prefix:[_,(())]; cycle:[S(w),_])");
        match &e {
            Expr::Spine { mode, prefix, cycle } => {
                assert_eq!(*mode, Mode::Glue);
                assert_eq!(prefix.len(), 2);
                assert!(prefix[0].is_none());
                assert_eq!(cycle.len(), 2);
                assert!(cycle[1].is_none());
            }
            other => panic!("wrong shape: {other:?}"),
        }
        assert_eq!(e.to_string(), "spine[glue](prefix:[_,(())]; cycle:[S(w),_])");
        let t = e.to_spined().unwrap();
        t.validate().unwrap();
    }

    #[test]
    fn sequences() {
        let e = round("seq(prefix:[()]; cycle:[(()),()])");
        let s = e.to_epseq().unwrap();
        assert_eq!(s.prefix().len(), 1);
        assert_eq!(s.cycle().len(), 2);
        assert!(e.to_spined().is_err());
        assert!(parse("seq(prefix:[]; cycle:[])").is_err() || {
            parse("seq(prefix:[]; cycle:[])").unwrap().to_epseq().is_err()
        });
    }

    #[test]
    fn length_substitutions() {
        let e = round("sf(spine[attach](prefix:[]; cycle:[S(1)]), ppow(2))");
        let t = e.to_spined().unwrap();
        t.validate().unwrap();
        round("sf(spine[attach](prefix:[]; cycle:[()]), natseq(prefix:[3]; cycle:[2,5]))");
        assert!(parse("sf(S(1), ppow(4))").is_err());
        // a base with gaps fails the side conditions at evaluation time
        let gap = parse("sf(spine[attach](prefix:[]; cycle:[(),_]), ppow(2))").unwrap();
        assert!(gap.to_spined().is_err());
    }

    #[test]
    fn error_positions() {
        match parse("spine[grow](prefix:[]; cycle:[_])") {
            Err(Error::Parse { line: 1, col, .. }) => assert_eq!(col, 7),
            other => panic!("expected a parse error, got {other:?}"),
        }
        match parse("(()") {
            Err(Error::Parse { line: 1, .. }) => {}
            other => panic!("expected a parse error, got {other:?}"),
        }
        match parse("comb(4) ") {
            Ok(_) => {}
            other => panic!("trailing space should be fine, got {other:?}"),
        }
        match parse("comb(4) junk") {
            Err(Error::Parse { col: 9, .. }) => {}
            other => panic!("expected trailing-input error at col 9, got {other:?}"),
        }
        match parse("S (w)\n+ 3") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("expected error on line 2, got {other:?}"),
        }
    }
}
