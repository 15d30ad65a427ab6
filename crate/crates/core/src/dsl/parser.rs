use indexmap::IndexMap;

use super::lexer::{tokenize, Tok, Token};
use super::{DslError, GameBody, GameDoc, ParseError, DEFAULT_PLAYERS};
use crate::cyclic::{CyclicGame, CyclicNode, Target};
use crate::game::{ActionLabel, FiniteGame, Outcome, PlayerId, Utility};
use crate::matrix::{MatrixGame, Rational};
use crate::parametric::{AffineOutcome, AffineValue, Move, ParametricGame, Shape};

const RESERVED: [&str; 8] = [
    "players", "finite", "cyclic", "param", "matrix", "leaf", "advance", "start",
];

/// Parses a `.game` document.
pub fn parse(text: &str) -> Result<GameDoc, DslError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let doc = p.doc()?;
    if let GameBody::Finite(g) = &doc.body {
        let report = g.validate();
        if !report.is_empty() {
            return Err(DslError::Validation(report));
        }
    }
    Ok(doc)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error_at(token: &Token, expected: impl Into<String>) -> ParseError {
        ParseError {
            line: token.line,
            column: token.column,
            expected: expected.into(),
            found: token.tok.to_string(),
        }
    }

    fn error(&self, expected: impl Into<String>) -> ParseError {
        Self::error_at(self.peek(), expected)
    }

    fn expect(&mut self, tok: Tok) -> PResult<Token> {
        if self.peek().tok == tok {
            Ok(self.next())
        } else {
            Err(self.error(tok.to_string()))
        }
    }

    fn keyword(&mut self, word: &str) -> PResult<Token> {
        match &self.peek().tok {
            Tok::Ident(s) if s == word => Ok(self.next()),
            _ => Err(self.error(format!("`{word}`"))),
        }
    }

    fn at_keyword(&self, word: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == word)
    }

    fn ident(&mut self, what: &str) -> PResult<(String, Token)> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                Ok((s, self.next()))
            }
            _ => Err(self.error(what)),
        }
    }

    /// An identifier that is not a keyword.
    fn name(&mut self, what: &str) -> PResult<(String, Token)> {
        match &self.peek().tok {
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => self.ident(what),
            _ => Err(self.error(what)),
        }
    }

    fn label(&mut self) -> PResult<(ActionLabel, Token)> {
        let (s, t) = self.ident("an action label")?;
        Ok((ActionLabel::new(s), t))
    }

    fn skip_semi(&mut self) {
        if self.peek().tok == Tok::Semi {
            self.next();
        }
    }

    fn doc(&mut self) -> PResult<GameDoc> {
        let mut players = DEFAULT_PLAYERS.map(String::from);
        if self.at_keyword("players") {
            self.next();
            let (first, _) = self.name("a player name")?;
            let (second, t) = self.name("a player name")?;
            if second == first {
                return Err(Self::error_at(&t, "a second, distinct player name"));
            }
            players = [first, second];
        }
        let body = match &self.peek().tok {
            Tok::Ident(s) if s == "finite" => {
                self.next();
                self.expect(Tok::LBrace)?;
                let tree = self.tree(&players)?;
                self.expect(Tok::RBrace)?;
                GameBody::Finite(tree)
            }
            Tok::Ident(s) if s == "cyclic" => GameBody::Cyclic(self.cyclic(&players)?),
            Tok::Ident(s) if s == "param" => GameBody::Parametric(self.param(&players)?),
            Tok::Ident(s) if s == "matrix" => GameBody::Matrix(self.matrix()?),
            _ => return Err(self.error("`finite`, `cyclic`, `param` or `matrix`")),
        };
        self.expect(Tok::Eof)?;
        Ok(GameDoc { players, body })
    }

    fn owner(&mut self, players: &[String; 2]) -> PResult<PlayerId> {
        let expected = format!("a player name (`{}` or `{}`)", players[0], players[1]);
        match &self.peek().tok {
            Tok::Ident(s) => match players.iter().position(|p| p == s) {
                Some(i) => {
                    self.next();
                    Ok(PlayerId(i))
                }
                None => Err(self.error(expected)),
            },
            _ => Err(self.error(expected)),
        }
    }

    fn int(&mut self) -> PResult<i64> {
        let negative = self.peek().tok == Tok::Minus;
        if negative {
            self.next();
        }
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(digits) => {
                let text = if negative { format!("-{digits}") } else { digits.clone() };
                let v = text
                    .parse::<i64>()
                    .map_err(|_| Self::error_at(&t, "an integer in range"))?;
                self.next();
                Ok(v)
            }
            _ => Err(self.error("an integer")),
        }
    }

    /// The whole `leaf(x, y)` form, with `item` parsing each component.
    fn leaf_of<T>(&mut self, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        self.keyword("leaf")?;
        self.expect(Tok::LParen)?;
        let first = item(self)?;
        self.expect(Tok::Comma)?;
        let second = item(self)?;
        self.expect(Tok::RParen)?;
        Ok(vec![first, second])
    }

    fn tree(&mut self, players: &[String; 2]) -> PResult<FiniteGame> {
        if self.at_keyword("leaf") {
            let values: Vec<Utility> = self.leaf_of(Self::int)?;
            return Ok(FiniteGame::Leaf(Outcome::new(values)));
        }
        let owner = self.owner(players)?;
        self.expect(Tok::LBrace)?;
        let mut branches: Vec<(ActionLabel, FiniteGame)> = Vec::new();
        loop {
            let (label, t) = self.label()?;
            if branches.iter().any(|(l, _)| *l == label) {
                return Err(Self::error_at(&t, "a label distinct from its siblings"));
            }
            self.expect(Tok::Arrow)?;
            let sub = self.tree(players)?;
            branches.push((label, sub));
            self.skip_semi();
            if self.peek().tok == Tok::RBrace {
                self.next();
                break;
            }
        }
        Ok(FiniteGame::Node { owner, branches })
    }

    /// Shared frame of `cyclic` and `param`: `start=ID { (ID: NAME { edges })+ }`.
    /// Returns the start name and its token, plus every point with its edges.
    #[allow(clippy::type_complexity)]
    fn graph<E>(
        &mut self,
        players: &[String; 2],
        mut edge: impl FnMut(&mut Self) -> PResult<E>,
    ) -> PResult<((String, Token), Vec<(String, Token, PlayerId, Vec<(ActionLabel, E)>)>)> {
        self.keyword("start")?;
        self.expect(Tok::Eq)?;
        let start = self.name("a start node name")?;
        self.expect(Tok::LBrace)?;
        let mut points: Vec<(String, Token, PlayerId, Vec<(ActionLabel, E)>)> = Vec::new();
        loop {
            let (name, t) = self.name("a node name")?;
            if points.iter().any(|(n, ..)| *n == name) {
                return Err(Self::error_at(&t, "a node name not defined before"));
            }
            self.expect(Tok::Colon)?;
            let owner = self.owner(players)?;
            self.expect(Tok::LBrace)?;
            let mut edges: Vec<(ActionLabel, E)> = Vec::new();
            loop {
                let (label, lt) = self.label()?;
                if edges.iter().any(|(l, _)| *l == label) {
                    return Err(Self::error_at(&lt, "a label distinct from its siblings"));
                }
                self.expect(Tok::Arrow)?;
                edges.push((label, edge(self)?));
                self.skip_semi();
                if self.peek().tok == Tok::RBrace {
                    self.next();
                    break;
                }
            }
            points.push((name, t, owner, edges));
            if self.peek().tok == Tok::RBrace {
                self.next();
                break;
            }
        }
        Ok((start, points))
    }

    fn check_refs<'a>(
        start: &(String, Token),
        names: &[&str],
        refs: impl Iterator<Item = &'a (String, Token)>,
    ) -> PResult<()> {
        if !names.contains(&start.0.as_str()) {
            return Err(Self::error_at(&start.1, "the name of a defined node"));
        }
        for (r, t) in refs {
            if !names.contains(&r.as_str()) {
                return Err(Self::error_at(t, "the name of a defined node"));
            }
        }
        Ok(())
    }

    fn cyclic(&mut self, players: &[String; 2]) -> PResult<CyclicGame> {
        self.keyword("cyclic")?;
        enum E {
            Node(String, Token),
            Leaf(Outcome),
        }
        let (start, points) = self.graph(players, |p| {
            if p.at_keyword("leaf") {
                Ok(E::Leaf(Outcome::new(p.leaf_of(Self::int)?)))
            } else {
                let (n, t) = p.name("a node name or `leaf(...)`")?;
                Ok(E::Node(n, t))
            }
        })?;
        let names: Vec<&str> = points.iter().map(|(n, ..)| n.as_str()).collect();
        let refs: Vec<(String, Token)> = points
            .iter()
            .flat_map(|(.., edges)| edges.iter())
            .filter_map(|(_, e)| match e {
                E::Node(n, t) => Some((n.clone(), t.clone())),
                E::Leaf(_) => None,
            })
            .collect();
        Self::check_refs(&start, &names, refs.iter())?;
        let nodes: IndexMap<String, CyclicNode> = points
            .into_iter()
            .map(|(name, _, owner, edges)| {
                let edges = edges
                    .into_iter()
                    .map(|(l, e)| {
                        let t = match e {
                            E::Node(n, _) => Target::Node(n),
                            E::Leaf(o) => Target::Leaf(o),
                        };
                        (l, t)
                    })
                    .collect();
                (name, CyclicNode { owner, edges })
            })
            .collect();
        Ok(CyclicGame::from_parts(start.0, nodes).expect("validated while parsing"))
    }

    fn affine(&mut self) -> PResult<AffineValue> {
        let a = self.int()?;
        let sign = match self.peek().tok {
            Tok::Plus => 1,
            Tok::Minus => -1,
            _ => return Ok(AffineValue::constant(a)),
        };
        self.next();
        let t = self.peek().clone();
        let Tok::Int(digits) = &t.tok else {
            return Err(self.error("a slope (unsigned integer)"));
        };
        let b = digits
            .parse::<i64>()
            .map_err(|_| Self::error_at(&t, "an integer in range"))?;
        self.next();
        self.expect(Tok::Star)?;
        self.keyword("n")?;
        Ok(AffineValue::new(a, sign * b))
    }

    fn param(&mut self, players: &[String; 2]) -> PResult<ParametricGame> {
        self.keyword("param")?;
        enum E {
            Advance(String, Token),
            Leaf(AffineOutcome),
        }
        let (start, points) = self.graph(players, |p| {
            if p.at_keyword("advance") {
                p.next();
                let (n, t) = p.name("a shape name")?;
                Ok(E::Advance(n, t))
            } else if p.at_keyword("leaf") {
                Ok(E::Leaf(AffineOutcome::new(p.leaf_of(Self::affine)?)))
            } else {
                Err(p.error("`advance` or `leaf`"))
            }
        })?;
        let names: Vec<&str> = points.iter().map(|(n, ..)| n.as_str()).collect();
        let refs: Vec<(String, Token)> = points
            .iter()
            .flat_map(|(.., edges)| edges.iter())
            .filter_map(|(_, e)| match e {
                E::Advance(n, t) => Some((n.clone(), t.clone())),
                E::Leaf(_) => None,
            })
            .collect();
        Self::check_refs(&start, &names, refs.iter())?;
        let shapes: IndexMap<String, Shape> = points
            .into_iter()
            .map(|(name, _, owner, edges)| {
                let moves = edges
                    .into_iter()
                    .map(|(l, e)| {
                        let m = match e {
                            E::Advance(n, _) => Move::Advance(n),
                            E::Leaf(o) => Move::Leaf(o),
                        };
                        (l, m)
                    })
                    .collect();
                (name, Shape { owner, moves })
            })
            .collect();
        Ok(ParametricGame::from_parts(start.0, shapes).expect("validated while parsing"))
    }

    fn rational(&mut self) -> PResult<Rational> {
        let numer = self.int()?;
        if self.peek().tok != Tok::Slash {
            return Ok(Rational::from_integer(numer as i128));
        }
        self.next();
        let t = self.peek().clone();
        let denom = self.int()?;
        if denom == 0 {
            return Err(Self::error_at(&t, "a nonzero denominator"));
        }
        Ok(Rational::new(numer as i128, denom as i128))
    }

    fn at_rational(&self) -> bool {
        matches!(self.peek().tok, Tok::Int(_) | Tok::Minus)
    }

    fn matrix(&mut self) -> PResult<MatrixGame> {
        self.keyword("matrix")?;
        self.keyword("sum")?;
        self.expect(Tok::Eq)?;
        let sum = self.rational()?;
        self.expect(Tok::LBrace)?;
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        loop {
            let mut row = vec![self.rational()?];
            while self.at_rational() {
                row.push(self.rational()?);
            }
            if let Some(first) = rows.first() {
                if row.len() != first.len() {
                    return Err(self.error(format!("a row of {} entries", first.len())));
                }
            }
            rows.push(row);
            match self.peek().tok {
                Tok::Semi => {
                    self.next();
                    if self.peek().tok == Tok::RBrace {
                        self.next();
                        break;
                    }
                }
                Tok::RBrace => {
                    self.next();
                    break;
                }
                _ => return Err(self.error("a number, `;` or `}`")),
            }
        }
        Ok(MatrixGame::new(rows, sum).expect("rectangular and nonempty"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(text: &str) -> ParseError {
        match parse(text) {
            Err(DslError::Parse(e)) => e,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn single_leaf() {
        let doc = parse("finite { leaf(0,1) }").unwrap();
        assert_eq!(doc.body, GameBody::Finite(FiniteGame::leaf(0, 1)));
        assert_eq!(doc.players, ["Alice", "Bertrand"]);
    }

    #[test]
    fn custom_players() {
        let doc = parse("players Ann Bob finite { Bob { x -> leaf(1, 2) } }").unwrap();
        assert_eq!(doc.players, ["Ann", "Bob"]);
        assert_eq!(
            doc.body,
            GameBody::Finite(FiniteGame::node(PlayerId::BERTRAND, [("x", FiniteGame::leaf(1, 2))]))
        );
    }

    #[test]
    fn duplicate_sibling_label() {
        let e = err("finite { Alice { c -> leaf(0,1); c -> leaf(1,0) } }");
        assert_eq!((e.line, e.column), (1, 34));
        assert!(e.expected.contains("distinct"));
    }

    #[test]
    fn leaf_arity_is_a_parse_error() {
        let e = err("finite { Alice { c -> leaf(0,1,0) } }");
        assert_eq!(e.expected, "`)`");
        assert_eq!(e.column, 31);
    }

    #[test]
    fn dangling_reference() {
        let e = err("cyclic start=A { A: Alice { a -> leaf(0,1); c -> C } }");
        assert_eq!(e.column, 50);
        let e = err("cyclic start=Z { A: Alice { a -> leaf(0,1) } }");
        assert_eq!(e.column, 14);
    }

    #[test]
    fn unknown_owner() {
        let e = err("finite { Carol { x -> leaf(0,0) } }");
        assert!(e.expected.contains("player name"));
        assert_eq!(e.found, "`Carol`");
    }

    #[test]
    fn affine_forms() {
        let doc = parse("param start=S { S: Alice { a -> leaf(100-1*n, -3 + 2 * n); c -> advance S } }").unwrap();
        let GameBody::Parametric(g) = doc.body else { panic!() };
        let Move::Leaf(o) = &g.shapes()["S"].moves[0].1 else {
            panic!()
        };
        assert_eq!(o.values(), [AffineValue::new(100, -1), AffineValue::new(-3, 2)]);
    }

    #[test]
    fn ragged_matrix() {
        let e = err("matrix sum=1 { 1 0 ; 0 }");
        assert_eq!(e.column, 24);
    }

    #[test]
    fn zero_denominator() {
        let e = err("matrix sum=1 { 1/0 }");
        assert_eq!(e.column, 18);
    }
}
