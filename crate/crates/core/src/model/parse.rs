//! Text format reader.
//!
//! The format is token based: `#` starts a comment, newlines count as blank
//! space, and every statement is delimited by its own grammar. Keywords are
//! reserved and rejected as identifiers, which is what makes the statement
//! boundaries unambiguous. Parsing resolves names to dense ids and checks
//! nothing else; semantic checks live in `validate`.

use super::*;
use std::collections::HashMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

const KEYWORDS: &[&str] = &[
    "fsr",
    "vertex",
    "edge",
    "tile",
    "subdivision",
    "sphere",
    "interior",
    "face",
    "side",
    "corner",
    "bp",
    "image",
    "rot",
    "subdivides",
    "slot",
    "finite",
    "infinite",
];

fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Signed(bool, String),
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Colon,
    Equals,
    Arrow,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Signed(s, w) => format!("`{}{w}`", if *s { '+' } else { '-' }),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Arrow => "`->`".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.'
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                bump(&mut chars);
            }
            continue;
        }
        let tok = match c {
            '[' => {
                bump(&mut chars);
                Tok::LBrack
            }
            ']' => {
                bump(&mut chars);
                Tok::RBrack
            }
            '{' => {
                bump(&mut chars);
                Tok::LBrace
            }
            '}' => {
                bump(&mut chars);
                Tok::RBrace
            }
            '(' => {
                bump(&mut chars);
                Tok::LParen
            }
            ')' => {
                bump(&mut chars);
                Tok::RParen
            }
            ',' => {
                bump(&mut chars);
                Tok::Comma
            }
            ':' => {
                bump(&mut chars);
                Tok::Colon
            }
            '=' => {
                bump(&mut chars);
                Tok::Equals
            }
            '-' | '+' => {
                let sign = c == '+';
                bump(&mut chars);
                match chars.peek() {
                    Some('>') if !sign => {
                        bump(&mut chars);
                        Tok::Arrow
                    }
                    Some(&c2) if is_word_char(c2) => {
                        let mut w = String::new();
                        while let Some(&c2) = chars.peek() {
                            if !is_word_char(c2) {
                                break;
                            }
                            w.push(bump(&mut chars));
                        }
                        Tok::Signed(sign, w)
                    }
                    _ => {
                        return Err(ParseError {
                            line: tl,
                            col: tc,
                            msg: format!("stray `{c}`"),
                        })
                    }
                }
            }
            c if is_word_char(c) => {
                let mut w = String::new();
                while let Some(&c2) = chars.peek() {
                    if !is_word_char(c2) {
                        break;
                    }
                    w.push(bump(&mut chars));
                }
                Tok::Word(w)
            }
            other => {
                return Err(ParseError {
                    line: tl,
                    col: tc,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push(Token {
            tok,
            line: tl,
            col: tc,
        });
    }
    Ok(out)
}

/// A name occurrence with its source position, resolved later.
#[derive(Debug, Clone)]
struct Ident {
    name: String,
    line: usize,
    col: usize,
}

impl Ident {
    fn err(&self, msg: String) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            msg,
        }
    }
}

#[derive(Debug, Clone)]
struct RawWord {
    images: Vec<(bool, Ident)>,
    points: Vec<Ident>,
}

#[derive(Debug, Clone)]
enum RawEndpoint {
    Corner(usize),
    BoundaryPoint { slot: usize, index: usize },
    Interior(Ident),
}

#[derive(Debug, Clone)]
struct RawSchemeEdge {
    name: Ident,
    tail: RawEndpoint,
    head: RawEndpoint,
    image: (bool, Ident),
}

#[derive(Debug, Clone)]
struct RawFace {
    name: Ident,
    sides: Vec<(bool, Ident)>,
    image: Ident,
    rot: usize,
}

#[derive(Debug, Clone)]
struct RawScheme {
    tile: Ident,
    interiors: Vec<(Ident, Ident)>,
    edges: Vec<RawSchemeEdge>,
    faces: Vec<RawFace>,
}

#[derive(Debug, Clone)]
struct RawSide {
    edge: Ident,
    a: (Ident, usize),
    b: (Ident, usize),
}

/// A signed edge and the corner after it, as they appear in a tile word.
type RawSlot = ((bool, Ident), Ident);

#[derive(Debug, Default)]
struct RawDoc {
    name: Option<Ident>,
    vertices: Vec<(Ident, WeightHint)>,
    edges: Vec<(Ident, Ident, Ident, Option<RawWord>)>,
    late_words: Vec<(Ident, RawWord)>,
    tiles: Vec<(Ident, Vec<RawSlot>)>,
    schemes: Vec<RawScheme>,
    sides: Vec<RawSide>,
}

struct Cursor {
    toks: Vec<Token>,
    pos: usize,
}

impl Cursor {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn eof_err(&self) -> ParseError {
        let (line, col) = self.toks.last().map(|t| (t.line, t.col)).unwrap_or((1, 1));
        ParseError {
            line,
            col,
            msg: "unexpected end of input".into(),
        }
    }

    fn next(&mut self) -> Result<Token, ParseError> {
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| self.eof_err())?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, want: Tok) -> Result<Token, ParseError> {
        let t = self.next()?;
        if t.tok == want {
            Ok(t)
        } else {
            Err(ParseError {
                line: t.line,
                col: t.col,
                msg: format!("expected {}, found {}", want.describe(), t.tok.describe()),
            })
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        let t = self.next()?;
        match &t.tok {
            Tok::Word(w) if w == kw => Ok(()),
            other => Err(ParseError {
                line: t.line,
                col: t.col,
                msg: format!("expected `{kw}`, found {}", other.describe()),
            }),
        }
    }

    fn expect_ident(&mut self) -> Result<Ident, ParseError> {
        let t = self.next()?;
        match &t.tok {
            Tok::Word(w) if !is_keyword(w) && !w.chars().next().unwrap().is_ascii_digit() => {
                Ok(Ident {
                    name: w.clone(),
                    line: t.line,
                    col: t.col,
                })
            }
            Tok::Word(w) if is_keyword(w) => Err(ParseError {
                line: t.line,
                col: t.col,
                msg: format!("`{w}` is a reserved word and cannot name anything"),
            }),
            other => Err(ParseError {
                line: t.line,
                col: t.col,
                msg: format!("expected an identifier, found {}", other.describe()),
            }),
        }
    }

    fn expect_usize(&mut self) -> Result<usize, ParseError> {
        let t = self.next()?;
        match &t.tok {
            Tok::Word(w) => w.parse().map_err(|_| ParseError {
                line: t.line,
                col: t.col,
                msg: format!("expected an integer, found `{w}`"),
            }),
            other => Err(ParseError {
                line: t.line,
                col: t.col,
                msg: format!("expected an integer, found {}", other.describe()),
            }),
        }
    }

    fn expect_signed(&mut self) -> Result<(bool, Ident), ParseError> {
        let t = self.next()?;
        match &t.tok {
            Tok::Signed(sign, w) if !is_keyword(w) => Ok((
                *sign,
                Ident {
                    name: w.clone(),
                    line: t.line,
                    col: t.col,
                },
            )),
            other => Err(ParseError {
                line: t.line,
                col: t.col,
                msg: format!(
                    "expected a signed edge like `+a`, found {}",
                    other.describe()
                ),
            }),
        }
    }

    fn at(&self, tok: &Tok) -> bool {
        self.peek().map(|t| &t.tok == tok).unwrap_or(false)
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Word(x), .. }) if x == w)
    }
}

fn parse_word_block(cur: &mut Cursor) -> Result<RawWord, ParseError> {
    cur.expect(Tok::LBrack)?;
    let mut images = vec![cur.expect_signed()?];
    let mut points = Vec::new();
    while !cur.at(&Tok::RBrack) {
        points.push(cur.expect_ident()?);
        images.push(cur.expect_signed()?);
    }
    cur.expect(Tok::RBrack)?;
    Ok(RawWord { images, points })
}

fn parse_endpoint(cur: &mut Cursor) -> Result<RawEndpoint, ParseError> {
    let t = cur.next()?;
    match &t.tok {
        Tok::Word(w) if w == "corner" => Ok(RawEndpoint::Corner(cur.expect_usize()?)),
        Tok::Word(w) if w == "interior" => Ok(RawEndpoint::Interior(cur.expect_ident()?)),
        Tok::Word(w) if w == "bp" => {
            let t2 = cur.next()?;
            let text = match &t2.tok {
                Tok::Word(x) => x.clone(),
                other => {
                    return Err(ParseError {
                        line: t2.line,
                        col: t2.col,
                        msg: format!(
                            "expected `slot.index` after `bp`, found {}",
                            other.describe()
                        ),
                    })
                }
            };
            let parsed = text
                .split_once('.')
                .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)));
            match parsed {
                Some((slot, index)) => Ok(RawEndpoint::BoundaryPoint { slot, index }),
                None => Err(ParseError {
                    line: t2.line,
                    col: t2.col,
                    msg: format!("expected `slot.index` after `bp`, found `{text}`"),
                }),
            }
        }
        other => Err(ParseError {
            line: t.line,
            col: t.col,
            msg: format!(
                "expected `corner`, `bp` or `interior`, found {}",
                other.describe()
            ),
        }),
    }
}

fn parse_raw(text: &str) -> Result<RawDoc, ParseError> {
    let mut cur = Cursor {
        toks: tokenize(text)?,
        pos: 0,
    };
    let mut doc = RawDoc::default();
    while let Some(t) = cur.peek() {
        let t = t.clone();
        let kw = match &t.tok {
            Tok::Word(w) => w.clone(),
            other => {
                return Err(ParseError {
                    line: t.line,
                    col: t.col,
                    msg: format!("expected a declaration keyword, found {}", other.describe()),
                })
            }
        };
        cur.pos += 1;
        match kw.as_str() {
            "fsr" => {
                let name = cur.expect_ident()?;
                if doc.name.is_some() {
                    return Err(name.err("duplicate `fsr` header".into()));
                }
                doc.name = Some(name);
            }
            "vertex" => {
                let mut any = false;
                loop {
                    match cur.peek() {
                        Some(Token {
                            tok: Tok::Word(w), ..
                        }) if !is_keyword(w) => {
                            let id = cur.expect_ident()?;
                            let mut hint = WeightHint::None;
                            if cur.at(&Tok::LParen) {
                                cur.expect(Tok::LParen)?;
                                let h = cur.next()?;
                                hint = match &h.tok {
                                    Tok::Word(x) if x == "finite" => WeightHint::Finite,
                                    Tok::Word(x) if x == "infinite" => WeightHint::Infinite,
                                    other => {
                                        return Err(ParseError {
                                            line: h.line,
                                            col: h.col,
                                            msg: format!(
                                                "expected `finite` or `infinite`, found {}",
                                                other.describe()
                                            ),
                                        })
                                    }
                                };
                                cur.expect(Tok::RParen)?;
                            }
                            doc.vertices.push((id, hint));
                            any = true;
                        }
                        _ => break,
                    }
                }
                if !any {
                    // surfaces the reserved-word message when that is what
                    // stopped the name list
                    cur.expect_ident()?;
                    return Err(ParseError {
                        line: t.line,
                        col: t.col,
                        msg: "`vertex` declares at least one name".into(),
                    });
                }
            }
            "edge" => {
                let name = cur.expect_ident()?;
                if cur.at(&Tok::Colon) {
                    cur.expect(Tok::Colon)?;
                    let tail = cur.expect_ident()?;
                    cur.expect(Tok::Arrow)?;
                    let head = cur.expect_ident()?;
                    let word = if cur.at_word("subdivides") {
                        cur.expect_keyword("subdivides")?;
                        Some(parse_word_block(&mut cur)?)
                    } else {
                        None
                    };
                    doc.edges.push((name, tail, head, word));
                } else if cur.at_word("subdivides") {
                    cur.expect_keyword("subdivides")?;
                    let word = parse_word_block(&mut cur)?;
                    doc.late_words.push((name, word));
                } else {
                    let got = cur
                        .peek()
                        .map(|t| t.tok.describe())
                        .unwrap_or("end of input".into());
                    return Err(name.err(format!(
                        "expected `:` or `subdivides` after edge name, found {got}"
                    )));
                }
            }
            "tile" => {
                let name = cur.expect_ident()?;
                cur.expect(Tok::Colon)?;
                cur.expect(Tok::LBrack)?;
                let mut slots = Vec::new();
                while !cur.at(&Tok::RBrack) {
                    let edge = cur.expect_signed()?;
                    let corner = cur.expect_ident()?;
                    slots.push((edge, corner));
                }
                cur.expect(Tok::RBrack)?;
                doc.tiles.push((name, slots));
            }
            "subdivision" => {
                let tile = cur.expect_ident()?;
                cur.expect(Tok::LBrace)?;
                let mut scheme = RawScheme {
                    tile,
                    interiors: Vec::new(),
                    edges: Vec::new(),
                    faces: Vec::new(),
                };
                while !cur.at(&Tok::RBrace) {
                    let t = cur.next()?;
                    let kw = match &t.tok {
                        Tok::Word(w) => w.clone(),
                        other => {
                            return Err(ParseError {
                                line: t.line,
                                col: t.col,
                                msg: format!(
                                    "expected `interior`, `edge` or `face`, found {}",
                                    other.describe()
                                ),
                            })
                        }
                    };
                    match kw.as_str() {
                        "interior" => {
                            let name = cur.expect_ident()?;
                            cur.expect(Tok::Colon)?;
                            let image = cur.expect_ident()?;
                            scheme.interiors.push((name, image));
                        }
                        "edge" => {
                            let name = cur.expect_ident()?;
                            cur.expect(Tok::Colon)?;
                            let tail = parse_endpoint(&mut cur)?;
                            cur.expect(Tok::Arrow)?;
                            let head = parse_endpoint(&mut cur)?;
                            cur.expect_keyword("image")?;
                            let image = cur.expect_signed()?;
                            scheme.edges.push(RawSchemeEdge {
                                name,
                                tail,
                                head,
                                image,
                            });
                        }
                        "face" => {
                            let name = cur.expect_ident()?;
                            cur.expect(Tok::Colon)?;
                            cur.expect(Tok::LBrack)?;
                            let mut sides = Vec::new();
                            while !cur.at(&Tok::RBrack) {
                                sides.push(cur.expect_signed()?);
                            }
                            cur.expect(Tok::RBrack)?;
                            cur.expect_keyword("image")?;
                            let image = cur.expect_ident()?;
                            cur.expect_keyword("rot")?;
                            let rot = cur.expect_usize()?;
                            scheme.faces.push(RawFace {
                                name,
                                sides,
                                image,
                                rot,
                            });
                        }
                        other => {
                            return Err(ParseError {
                                line: t.line,
                                col: t.col,
                                msg: format!("unknown scheme entry `{other}`"),
                            })
                        }
                    }
                }
                cur.expect(Tok::RBrace)?;
                doc.schemes.push(scheme);
            }
            "sphere" => {
                cur.expect(Tok::LBrace)?;
                while !cur.at(&Tok::RBrace) {
                    cur.expect_keyword("side")?;
                    let edge = cur.expect_ident()?;
                    cur.expect(Tok::Equals)?;
                    let side = |cur: &mut Cursor| -> Result<(Ident, usize), ParseError> {
                        cur.expect(Tok::LParen)?;
                        let tile = cur.expect_ident()?;
                        cur.expect(Tok::Comma)?;
                        cur.expect_keyword("slot")?;
                        let slot = cur.expect_usize()?;
                        cur.expect(Tok::RParen)?;
                        Ok((tile, slot))
                    };
                    let a = side(&mut cur)?;
                    cur.expect(Tok::Comma)?;
                    let b = side(&mut cur)?;
                    doc.sides.push(RawSide { edge, a, b });
                }
                cur.expect(Tok::RBrace)?;
            }
            other => {
                return Err(ParseError {
                    line: t.line,
                    col: t.col,
                    msg: format!("unknown declaration `{other}`"),
                })
            }
        }
    }
    Ok(doc)
}

struct NameTable {
    map: HashMap<String, usize>,
}

impl NameTable {
    fn build(kind: &str, names: impl Iterator<Item = Ident>) -> Result<Self, ParseError> {
        let mut map = HashMap::new();
        for (i, id) in names.enumerate() {
            if map.insert(id.name.clone(), i).is_some() {
                return Err(id.err(format!("duplicate {kind} `{}`", id.name)));
            }
        }
        Ok(NameTable { map })
    }

    fn get(&self, kind: &str, id: &Ident) -> Result<usize, ParseError> {
        self.map
            .get(&id.name)
            .copied()
            .ok_or_else(|| id.err(format!("unknown {kind} `{}`", id.name)))
    }
}

/// Parses a `.fsr` document. Names are resolved to dense ids; all structural
/// cross references must exist. No semantic validation happens here.
pub fn parse_fsr(text: &str) -> Result<FsrSpec, ParseError> {
    let doc = parse_raw(text)?;
    let name = doc
        .name
        .as_ref()
        .map(|n| n.name.clone())
        .ok_or_else(|| ParseError {
            line: 1,
            col: 1,
            msg: "missing `fsr <name>` header".into(),
        })?;

    let vtab = NameTable::build("vertex", doc.vertices.iter().map(|(id, _)| id.clone()))?;
    let etab = NameTable::build("edge", doc.edges.iter().map(|(id, ..)| id.clone()))?;
    let ttab = NameTable::build("tile", doc.tiles.iter().map(|(id, _)| id.clone()))?;

    let vertices: Vec<VertexType> = doc
        .vertices
        .iter()
        .map(|(id, hint)| VertexType {
            name: id.name.clone(),
            hint: *hint,
        })
        .collect();

    // Attach late `subdivides` statements to their edges.
    let mut words: Vec<Option<RawWord>> = doc.edges.iter().map(|(.., w)| w.clone()).collect();
    for (id, word) in &doc.late_words {
        let e = etab.get("edge", id)?;
        if words[e].is_some() {
            return Err(id.err(format!("duplicate subdivision word for edge `{}`", id.name)));
        }
        words[e] = Some(word.clone());
    }

    let resolve_word = |raw: &RawWord| -> Result<EdgeWord, ParseError> {
        let images = raw
            .images
            .iter()
            .map(|(sign, id)| {
                Ok(OrientedEdge {
                    edge: etab.get("edge", id)?,
                    forward: *sign,
                })
            })
            .collect::<Result<Vec<_>, ParseError>>()?;
        let points = raw
            .points
            .iter()
            .map(|id| vtab.get("vertex", id))
            .collect::<Result<Vec<_>, ParseError>>()?;
        Ok(EdgeWord { images, points })
    };

    let mut edges = Vec::new();
    for (i, (id, tail, head, _)) in doc.edges.iter().enumerate() {
        let word = match &words[i] {
            Some(w) => resolve_word(w)?,
            None => return Err(id.err(format!("edge `{}` has no subdivision word", id.name))),
        };
        edges.push(EdgeType {
            name: id.name.clone(),
            tail: vtab.get("vertex", tail)?,
            head: vtab.get("vertex", head)?,
            word,
        });
    }

    let mut tiles = Vec::new();
    for (id, raw_slots) in &doc.tiles {
        let mut slots = Vec::new();
        for ((sign, edge), corner) in raw_slots {
            slots.push(Slot {
                edge: OrientedEdge {
                    edge: etab.get("edge", edge)?,
                    forward: *sign,
                },
                corner: vtab.get("vertex", corner)?,
            });
        }
        tiles.push(TileType {
            name: id.name.clone(),
            slots,
        });
    }

    let mut schemes: Vec<Option<SubdivisionScheme>> = vec![None; tiles.len()];
    for raw in &doc.schemes {
        let tile = ttab.get("tile", &raw.tile)?;
        if schemes[tile].is_some() {
            return Err(raw.tile.err(format!(
                "duplicate subdivision for tile `{}`",
                raw.tile.name
            )));
        }
        let itab = NameTable::build(
            "interior vertex",
            raw.interiors.iter().map(|(id, _)| id.clone()),
        )?;
        let setab = NameTable::build("scheme edge", raw.edges.iter().map(|e| e.name.clone()))?;
        NameTable::build("scheme face", raw.faces.iter().map(|f| f.name.clone()))?;

        let boundary_len = tiles[tile].len();
        let resolve_endpoint = |raw: &RawEndpoint, at: &Ident| -> Result<LocalVertex, ParseError> {
            match raw {
                RawEndpoint::Corner(i) => {
                    if *i >= boundary_len {
                        return Err(at.err(format!(
                            "corner {i} is out of range for tile `{}` with {boundary_len} sides",
                            raw_name(&doc, tile)
                        )));
                    }
                    Ok(LocalVertex::Corner(*i))
                }
                RawEndpoint::BoundaryPoint { slot, index } => {
                    if *slot >= boundary_len {
                        return Err(at.err(format!(
                            "slot {slot} is out of range for tile `{}` with {boundary_len} sides",
                            raw_name(&doc, tile)
                        )));
                    }
                    let e = tiles[tile].slots[*slot].edge.edge;
                    let npoints = edges[e].word.points.len();
                    if *index == 0 || *index > npoints {
                        return Err(at.err(format!(
                            "bp {slot}.{index} does not exist: edge `{}` has {npoints} interior points",
                            edges[e].name
                        )));
                    }
                    Ok(LocalVertex::BoundaryPoint {
                        slot: *slot,
                        index: *index,
                    })
                }
                RawEndpoint::Interior(id) => {
                    Ok(LocalVertex::Interior(itab.get("interior vertex", id)?))
                }
            }
        };

        let interiors = raw
            .interiors
            .iter()
            .map(|(id, image)| {
                Ok(SchemeInterior {
                    name: id.name.clone(),
                    image: vtab.get("vertex", image)?,
                })
            })
            .collect::<Result<Vec<_>, ParseError>>()?;
        let sedges = raw
            .edges
            .iter()
            .map(|e| {
                Ok(SchemeEdge {
                    name: e.name.name.clone(),
                    tail: resolve_endpoint(&e.tail, &e.name)?,
                    head: resolve_endpoint(&e.head, &e.name)?,
                    image: OrientedEdge {
                        edge: etab.get("edge", &e.image.1)?,
                        forward: e.image.0,
                    },
                })
            })
            .collect::<Result<Vec<_>, ParseError>>()?;
        let faces = raw
            .faces
            .iter()
            .map(|f| {
                let sides = f
                    .sides
                    .iter()
                    .map(|(sign, id)| {
                        Ok(DirectedLocal {
                            edge: setab.get("scheme edge", id)?,
                            forward: *sign,
                        })
                    })
                    .collect::<Result<Vec<_>, ParseError>>()?;
                Ok(SchemeFace {
                    name: f.name.name.clone(),
                    sides,
                    image: ttab.get("tile", &f.image)?,
                    rot: f.rot,
                })
            })
            .collect::<Result<Vec<_>, ParseError>>()?;
        schemes[tile] = Some(SubdivisionScheme {
            tile,
            interiors,
            edges: sedges,
            faces,
        });
    }
    let schemes = schemes
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            s.ok_or_else(|| ParseError {
                line: 1,
                col: 1,
                msg: format!("tile `{}` has no subdivision", tiles[i].name),
            })
        })
        .collect::<Result<Vec<_>, ParseError>>()?;

    let mut sides: Vec<Option<[EdgeSide; 2]>> = vec![None; edges.len()];
    for raw in &doc.sides {
        let e = etab.get("edge", &raw.edge)?;
        if sides[e].is_some() {
            return Err(raw.edge.err(format!(
                "duplicate sphere sides for edge `{}`",
                raw.edge.name
            )));
        }
        let resolve = |(tile, slot): &(Ident, usize)| -> Result<EdgeSide, ParseError> {
            let t = ttab.get("tile", tile)?;
            if *slot >= tiles[t].len() {
                return Err(tile.err(format!(
                    "slot {slot} is out of range for tile `{}` with {} sides",
                    tile.name,
                    tiles[t].len()
                )));
            }
            Ok(EdgeSide {
                tile: t,
                slot: *slot,
            })
        };
        sides[e] = Some([resolve(&raw.a)?, resolve(&raw.b)?]);
    }
    let sides = sides
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            s.ok_or_else(|| ParseError {
                line: 1,
                col: 1,
                msg: format!("edge `{}` has no sphere sides", edges[i].name),
            })
        })
        .collect::<Result<Vec<_>, ParseError>>()?;

    Ok(FsrSpec {
        name,
        vertices,
        edges,
        tiles,
        schemes,
        gluing: SphereGluing { sides },
    })
}

fn raw_name(doc: &RawDoc, tile: usize) -> &str {
    &doc.tiles[tile].0.name
}
