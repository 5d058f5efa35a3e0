//! Text format for intersection instances and seeded instance generators.
//!
//! An instance file holds exactly two matroid stanzas over the same ground
//! size, optionally preceded by `instance <name>`. Tokens are separated by
//! whitespace and `#` starts a comment running to the end of the line.
//!
//! ```text
//! uniform <n> <k>
//! partition <n> <class id per element> <cap per class>   # classes 0..=max id
//! graphic <vertices> <edges> <u v per edge>              # n = edges
//! gf2 <rows> <n> <one 0/1 string of length n per row>
//! ```

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::error::MatroidError;
use crate::oracle::{GraphicMatroid, IndependenceOracle, LinearMatroidGf2, PartitionMatroid, UniformMatroid};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MatroidSpec {
    Uniform {
        n: usize,
        k: usize,
    },
    Partition {
        class_of: Vec<usize>,
        caps: Vec<usize>,
    },
    Graphic {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
    Gf2 {
        columns: usize,
        rows: Vec<Vec<bool>>,
    },
}

impl MatroidSpec {
    pub fn ground_size(&self) -> usize {
        match self {
            MatroidSpec::Uniform { n, .. } => *n,
            MatroidSpec::Partition { class_of, .. } => class_of.len(),
            MatroidSpec::Graphic { edges, .. } => edges.len(),
            MatroidSpec::Gf2 { columns, .. } => *columns,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            MatroidSpec::Uniform { .. } => "uniform",
            MatroidSpec::Partition { .. } => "partition",
            MatroidSpec::Graphic { .. } => "graphic",
            MatroidSpec::Gf2 { .. } => "gf2",
        }
    }

    pub fn build(&self) -> Result<Box<dyn IndependenceOracle>, MatroidError> {
        Ok(match self {
            MatroidSpec::Uniform { n, k } => Box::new(UniformMatroid::new(*n, *k)),
            MatroidSpec::Partition { class_of, caps } => {
                Box::new(PartitionMatroid::new(class_of.clone(), caps.clone())?)
            }
            MatroidSpec::Graphic { vertices, edges } => Box::new(GraphicMatroid::new(*vertices, edges.clone())?),
            MatroidSpec::Gf2 { columns, rows } => {
                if rows.is_empty() {
                    // No constraints: only the empty set is independent.
                    Box::new(UniformMatroid::new(*columns, 0))
                } else {
                    Box::new(LinearMatroidGf2::from_rows(rows)?)
                }
            }
        })
    }

    fn write_to(&self, out: &mut String) {
        match self {
            MatroidSpec::Uniform { n, k } => {
                let _ = writeln!(out, "uniform {n} {k}");
            }
            MatroidSpec::Partition { class_of, caps } => {
                let used = class_of.iter().max().map_or(0, |m| m + 1);
                let _ = writeln!(out, "partition {}", class_of.len());
                let _ = writeln!(out, "  {}", join(class_of.iter()));
                let _ = writeln!(out, "  {}", join(caps[..used].iter()));
            }
            MatroidSpec::Graphic { vertices, edges } => {
                let _ = writeln!(out, "graphic {vertices} {}", edges.len());
                let pairs: Vec<String> = edges.iter().map(|(u, v)| format!("{u} {v}")).collect();
                for chunk in pairs.chunks(8) {
                    let _ = writeln!(out, "  {}", chunk.join("  "));
                }
            }
            MatroidSpec::Gf2 { columns, rows } => {
                let _ = writeln!(out, "gf2 {} {columns}", rows.len());
                for row in rows {
                    let bits: String = row.iter().map(|&b| if b { '1' } else { '0' }).collect();
                    let _ = writeln!(out, "  {bits}");
                }
            }
        }
    }
}

fn join<T: fmt::Display>(items: impl Iterator<Item = T>) -> String {
    items.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// A named pair of matroids over a common ground set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceSpec {
    pub name: String,
    pub matroid1: MatroidSpec,
    pub matroid2: MatroidSpec,
}

pub type OraclePairBox = (Box<dyn IndependenceOracle>, Box<dyn IndependenceOracle>);

impl InstanceSpec {
    pub fn n(&self) -> usize {
        self.matroid1.ground_size()
    }

    pub fn oracles(&self) -> Result<OraclePairBox, MatroidError> {
        Ok((self.matroid1.build()?, self.matroid2.build()?))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.name.is_empty() {
            let _ = writeln!(out, "instance {}", self.name);
        }
        self.matroid1.write_to(&mut out);
        self.matroid2.write_to(&mut out);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("stanza {stanza}: {message}")]
    Semantic { stanza: usize, message: String },
}

#[derive(Clone, Copy, Debug)]
struct Token<'t> {
    text: &'t str,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut rest = line;
        let mut offset = 0;
        while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
            let tail = &rest[start..];
            let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
            out.push(Token {
                text: &tail[..len],
                line: i + 1,
                column: line[..offset + start].chars().count() + 1,
            });
            offset += start + len;
            rest = &tail[len..];
        }
    }
    out
}

struct Cursor<'t> {
    tokens: Vec<Token<'t>>,
    pos: usize,
    end: (usize, usize),
}

impl<'t> Cursor<'t> {
    fn peek(&self) -> Option<Token<'t>> {
        self.tokens.get(self.pos).copied()
    }

    fn next(&mut self, what: &str) -> Result<Token<'t>, ParseError> {
        let tok = self.peek().ok_or_else(|| ParseError::Syntax {
            line: self.end.0,
            column: self.end.1,
            message: format!("unexpected end of input, expected {what}"),
        })?;
        self.pos += 1;
        Ok(tok)
    }

    fn int(&mut self, what: &str) -> Result<usize, ParseError> {
        let tok = self.next(what)?;
        tok.text.parse().map_err(|_| ParseError::Syntax {
            line: tok.line,
            column: tok.column,
            message: format!("expected {what}, found `{}`", tok.text),
        })
    }
}

const KEYWORDS: [&str; 4] = ["uniform", "partition", "graphic", "gf2"];

/// Parses an instance file; see the module docs for the format.
pub fn parse_instance(text: &str) -> Result<InstanceSpec, ParseError> {
    let end = text
        .lines()
        .enumerate()
        .last()
        .map_or((1, 1), |(i, l)| (i + 1, l.chars().count() + 1));
    let mut cur = Cursor {
        tokens: tokenize(text),
        pos: 0,
        end,
    };
    let mut name = String::new();
    if cur.peek().is_some_and(|t| t.text == "instance") {
        cur.pos += 1;
        name = cur.next("instance name")?.text.to_string();
    }
    let mut stanzas = Vec::new();
    while let Some(tok) = cur.peek() {
        cur.pos += 1;
        let index = stanzas.len() + 1;
        let spec = match tok.text {
            "uniform" => {
                let n = cur.int("ground size")?;
                let k = cur.int("rank")?;
                MatroidSpec::Uniform { n, k }
            }
            "partition" => {
                let n = cur.int("ground size")?;
                let class_of = (0..n).map(|_| cur.int("class id")).collect::<Result<Vec<_>, _>>()?;
                let classes = class_of.iter().max().map_or(0, |m| m + 1);
                let caps = (0..classes)
                    .map(|_| cur.int("class capacity"))
                    .collect::<Result<Vec<_>, _>>()?;
                MatroidSpec::Partition { class_of, caps }
            }
            "graphic" => {
                let vertices = cur.int("vertex count")?;
                let m = cur.int("edge count")?;
                let mut edges = Vec::with_capacity(m);
                for _ in 0..m {
                    let u = cur.int("edge endpoint")?;
                    let v = cur.int("edge endpoint")?;
                    edges.push((u, v));
                }
                if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= vertices || v >= vertices) {
                    return Err(ParseError::Semantic {
                        stanza: index,
                        message: format!("edge ({u}, {v}) has an endpoint outside 0..{vertices}"),
                    });
                }
                MatroidSpec::Graphic { vertices, edges }
            }
            "gf2" => {
                let m = cur.int("row count")?;
                let columns = cur.int("column count")?;
                let mut rows = Vec::with_capacity(m);
                for _ in 0..m {
                    let t = cur.next("matrix row")?;
                    let row: Option<Vec<bool>> = t
                        .text
                        .chars()
                        .map(|c| match c {
                            '0' => Some(false),
                            '1' => Some(true),
                            _ => None,
                        })
                        .collect();
                    match row {
                        Some(row) if row.len() == columns => rows.push(row),
                        _ => {
                            return Err(ParseError::Syntax {
                                line: t.line,
                                column: t.column,
                                message: format!("expected a 0/1 row of length {columns}, found `{}`", t.text),
                            })
                        }
                    }
                }
                MatroidSpec::Gf2 { columns, rows }
            }
            other => {
                return Err(ParseError::Syntax {
                    line: tok.line,
                    column: tok.column,
                    message: format!("expected one of {}, found `{other}`", KEYWORDS.join(", ")),
                })
            }
        };
        stanzas.push(spec);
    }
    if stanzas.len() != 2 {
        return Err(ParseError::Semantic {
            stanza: stanzas.len().min(2) + 1,
            message: format!("an instance needs exactly two stanzas, found {}", stanzas.len()),
        });
    }
    let matroid2 = stanzas.pop().expect("two stanzas");
    let matroid1 = stanzas.pop().expect("two stanzas");
    if matroid1.ground_size() != matroid2.ground_size() {
        return Err(ParseError::Semantic {
            stanza: 2,
            message: format!(
                "ground size {} differs from the first stanza's {}",
                matroid2.ground_size(),
                matroid1.ground_size()
            ),
        });
    }
    Ok(InstanceSpec {
        name,
        matroid1,
        matroid2,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    BipartiteMatching,
    PartitionPair,
    GraphicVsPartition,
    Gf2Pair,
    UniformPair,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::BipartiteMatching,
        Family::PartitionPair,
        Family::GraphicVsPartition,
        Family::Gf2Pair,
        Family::UniformPair,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::BipartiteMatching => "bipartite-matching",
            Family::PartitionPair => "partition-pair",
            Family::GraphicVsPartition => "graphic-vs-partition",
            Family::Gf2Pair => "gf2-pair",
            Family::UniformPair => "uniform-pair",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("unknown instance family `{0}`")]
pub struct UnknownFamily(pub String);

impl FromStr for Family {
    type Err = UnknownFamily;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| UnknownFamily(s.to_string()))
    }
}

/// Size parameters for one generated instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    /// Edges of a random bipartite graph; `M1` caps each left vertex at one
    /// edge, `M2` each right vertex. With `planted`, a matching of size
    /// `min(left, right)` is included, so the optimum is known.
    BipartiteMatching {
        left: usize,
        right: usize,
        edges: usize,
        planted: bool,
    },
    /// Two independent random partitions into `classes` classes with caps in
    /// `1..=max_cap`.
    PartitionPair {
        n: usize,
        classes: usize,
        max_cap: usize,
    },
    /// A random multigraph's edges against a random partition of them.
    GraphicVsPartition {
        vertices: usize,
        edges: usize,
        classes: usize,
    },
    /// Two random `rows × n` matrices over GF(2).
    Gf2Pair {
        rows: usize,
        n: usize,
    },
    UniformPair {
        n: usize,
        k1: usize,
        k2: usize,
    },
}

impl Generator {
    pub fn family(&self) -> Family {
        match self {
            Generator::BipartiteMatching { .. } => Family::BipartiteMatching,
            Generator::PartitionPair { .. } => Family::PartitionPair,
            Generator::GraphicVsPartition { .. } => Family::GraphicVsPartition,
            Generator::Gf2Pair { .. } => Family::Gf2Pair,
            Generator::UniformPair { .. } => Family::UniformPair,
        }
    }

    /// Parameters for a scaling sweep at target rank about `r`, with `n = 4r`.
    pub fn scaled(family: Family, r: usize) -> Generator {
        let n = 4 * r;
        match family {
            Family::BipartiteMatching => Generator::BipartiteMatching {
                left: r,
                right: r,
                edges: n,
                planted: true,
            },
            Family::PartitionPair => Generator::PartitionPair {
                n,
                classes: r,
                max_cap: 1,
            },
            Family::GraphicVsPartition => Generator::GraphicVsPartition {
                vertices: r + 1,
                edges: n,
                classes: r,
            },
            Family::Gf2Pair => Generator::Gf2Pair { rows: r, n },
            Family::UniformPair => Generator::UniformPair { n, k1: r, k2: 2 * r },
        }
    }

    /// Random small parameters for `family` with ground size at most `max_n`
    /// (at least 1).
    pub fn small(family: Family, max_n: usize, rng: &mut impl Rng) -> Generator {
        let max_n = max_n.max(1);
        let n = rng.random_range(1..=max_n);
        match family {
            Family::BipartiteMatching => {
                let left = rng.random_range(1..=5);
                let right = rng.random_range(1..=5);
                let edges = rng.random_range(1..=(left * right).min(max_n));
                Generator::BipartiteMatching {
                    left,
                    right,
                    edges,
                    planted: false,
                }
            }
            Family::PartitionPair => Generator::PartitionPair {
                n,
                classes: rng.random_range(1..=n.clamp(1, 6)),
                max_cap: rng.random_range(1..=3),
            },
            Family::GraphicVsPartition => Generator::GraphicVsPartition {
                vertices: rng.random_range(2..=7),
                edges: n,
                classes: rng.random_range(1..=n.clamp(1, 6)),
            },
            Family::Gf2Pair => Generator::Gf2Pair {
                rows: rng.random_range(1..=6),
                n,
            },
            Family::UniformPair => Generator::UniformPair {
                n,
                k1: rng.random_range(0..=n),
                k2: rng.random_range(0..=n),
            },
        }
    }

    fn describe(&self) -> String {
        match *self {
            Generator::BipartiteMatching {
                left,
                right,
                edges,
                planted,
            } => format!(
                "bipartite-matching-{left}x{right}-e{edges}{}",
                if planted { "-planted" } else { "" }
            ),
            Generator::PartitionPair { n, classes, max_cap } => format!("partition-pair-n{n}-c{classes}-cap{max_cap}"),
            Generator::GraphicVsPartition {
                vertices,
                edges,
                classes,
            } => format!("graphic-vs-partition-v{vertices}-e{edges}-c{classes}"),
            Generator::Gf2Pair { rows, n } => format!("gf2-pair-{rows}x{n}"),
            Generator::UniformPair { n, k1, k2 } => format!("uniform-pair-n{n}-k{k1}-k{k2}"),
        }
    }
}

/// Deterministic instance for `generator` and `seed`.
pub fn generate_instance(generator: &Generator, seed: u64) -> InstanceSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let name = format!("{}-s{seed}", generator.describe());
    let (matroid1, matroid2) = match *generator {
        Generator::BipartiteMatching {
            left,
            right,
            edges,
            planted,
        } => {
            let edges = bipartite_edges(left, right, edges, planted, &mut rng);
            let side = |end: fn(&(usize, usize)) -> usize| {
                let class_of: Vec<usize> = edges.iter().map(end).collect();
                let used = class_of.iter().max().map_or(0, |m| m + 1);
                MatroidSpec::Partition {
                    class_of,
                    caps: vec![1; used],
                }
            };
            (side(|e| e.0), side(|e| e.1))
        }
        Generator::PartitionPair { n, classes, max_cap } => (
            random_partition(n, classes, max_cap, &mut rng),
            random_partition(n, classes, max_cap, &mut rng),
        ),
        Generator::GraphicVsPartition {
            vertices,
            edges,
            classes,
        } => {
            let vertices = vertices.max(1);
            let list = (0..edges)
                .map(|_| (rng.random_range(0..vertices), rng.random_range(0..vertices)))
                .collect();
            (
                MatroidSpec::Graphic { vertices, edges: list },
                random_partition(edges, classes, 2, &mut rng),
            )
        }
        Generator::Gf2Pair { rows, n } => (random_gf2(rows, n, &mut rng), random_gf2(rows, n, &mut rng)),
        Generator::UniformPair { n, k1, k2 } => (MatroidSpec::Uniform { n, k: k1 }, MatroidSpec::Uniform { n, k: k2 }),
    };
    InstanceSpec {
        name,
        matroid1,
        matroid2,
    }
}

/// A small random instance of `family`; size parameters are drawn from the seed.
pub fn small_instance(family: Family, max_n: usize, seed: u64) -> InstanceSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x005e_ed0f_5a11);
    let generator = Generator::small(family, max_n, &mut rng);
    generate_instance(&generator, seed)
}

fn bipartite_edges(
    left: usize,
    right: usize,
    edges: usize,
    planted: bool,
    rng: &mut ChaCha8Rng,
) -> Vec<(usize, usize)> {
    let total = left * right;
    let mut chosen = std::collections::HashSet::new();
    let mut list = Vec::new();
    if planted {
        let mut rights: Vec<usize> = (0..right).collect();
        rights.shuffle(rng);
        for (l, &r) in (0..left).zip(&rights) {
            chosen.insert((l, r));
            list.push((l, r));
        }
    }
    let want = edges.min(total).max(list.len());
    if want * 2 > total {
        let mut rest: Vec<(usize, usize)> = (0..left)
            .flat_map(|l| (0..right).map(move |r| (l, r)))
            .filter(|e| !chosen.contains(e))
            .collect();
        rest.shuffle(rng);
        list.extend(rest.into_iter().take(want - list.len()));
    } else {
        while list.len() < want {
            let e = (rng.random_range(0..left), rng.random_range(0..right));
            if chosen.insert(e) {
                list.push(e);
            }
        }
    }
    list.shuffle(rng);
    list
}

fn random_partition(n: usize, classes: usize, max_cap: usize, rng: &mut ChaCha8Rng) -> MatroidSpec {
    let classes = classes.max(1);
    let mut class_of: Vec<usize> = (0..n).map(|_| rng.random_range(0..classes)).collect();
    // Relabel so ids are dense in order of first use; the text format infers
    // the class count from the largest id.
    let mut relabel = vec![usize::MAX; classes];
    let mut next = 0;
    for c in class_of.iter_mut() {
        if relabel[*c] == usize::MAX {
            relabel[*c] = next;
            next += 1;
        }
        *c = relabel[*c];
    }
    let caps = (0..next).map(|_| rng.random_range(1..=max_cap.max(1))).collect();
    MatroidSpec::Partition { class_of, caps }
}

fn random_gf2(rows: usize, n: usize, rng: &mut ChaCha8Rng) -> MatroidSpec {
    MatroidSpec::Gf2 {
        columns: n,
        rows: (0..rows)
            .map(|_| (0..n).map(|_| rng.random_bool(0.5)).collect())
            .collect(),
    }
}
