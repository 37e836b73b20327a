//! JSON document types: serde-friendly mirrors of the crate's domain
//! values, with validating conversions in both directions.
//!
//! Words serialize as plain strings over single-character alphabets and as
//! token arrays otherwise; both forms are accepted on input. Matrix
//! entries travel as decimal strings because they outgrow fixed-width
//! integers quickly.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::floyd::{Derivation, Presentation, RewriteWitness};
use crate::freeness::{BlockFactorization, GammaGenerator, GammaRelation, GammaTag};
use crate::matrix::{EmbeddingReport, InstanceMatrices, Mat3, Nat, PairMatrices, StringPair};
use crate::search::SearchOutcome;
use crate::words::{Alphabet, PcpInstance, PcpSolution, Word};

/// A word, either as one string of single-character tokens or as an
/// explicit token array.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WordDoc {
    Text(String),
    Tokens(Vec<String>),
}

fn single_char(alphabet: &Alphabet) -> bool {
    alphabet.tokens().iter().all(|t| t.chars().count() == 1)
}

pub fn word_to_doc(w: &Word) -> WordDoc {
    if single_char(w.alphabet()) {
        WordDoc::Text(w.to_string())
    } else {
        WordDoc::Tokens(w.tokens().map(str::to_owned).collect())
    }
}

pub fn word_from_doc(alphabet: &Alphabet, doc: &WordDoc) -> Result<Word> {
    match doc {
        WordDoc::Text(text) => alphabet.parse_word(text),
        WordDoc::Tokens(tokens) => alphabet.word_from_tokens(tokens),
    }
}

/// A correspondence instance: its alphabet and its word pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDoc {
    pub alphabet: Vec<String>,
    pub pairs: Vec<(WordDoc, WordDoc)>,
}

impl InstanceDoc {
    pub fn from_instance(inst: &PcpInstance) -> Self {
        InstanceDoc {
            alphabet: inst.alphabet().tokens().to_vec(),
            pairs: inst
                .pairs()
                .iter()
                .map(|(u, v)| (word_to_doc(u), word_to_doc(v)))
                .collect(),
        }
    }

    pub fn to_instance(&self) -> Result<PcpInstance> {
        let alphabet = Alphabet::new(self.alphabet.iter().cloned())?;
        let pairs = self
            .pairs
            .iter()
            .map(|(u, v)| Ok((word_from_doc(&alphabet, u)?, word_from_doc(&alphabet, v)?)))
            .collect::<Result<Vec<_>>>()?;
        PcpInstance::new(alphabet, pairs)
    }
}

/// A semigroup presentation: letters and rewrite relations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationDoc {
    pub letters: Vec<String>,
    pub relations: Vec<(WordDoc, WordDoc)>,
}

impl PresentationDoc {
    pub fn from_presentation(pres: &Presentation) -> Self {
        PresentationDoc {
            letters: pres.letters().tokens().to_vec(),
            relations: pres
                .relations()
                .iter()
                .map(|(l, r)| (word_to_doc(l), word_to_doc(r)))
                .collect(),
        }
    }

    pub fn to_presentation(&self) -> Result<Presentation> {
        let letters = Alphabet::new(self.letters.iter().cloned())?;
        let relations = self
            .relations
            .iter()
            .map(|(l, r)| Ok((word_from_doc(&letters, l)?, word_from_doc(&letters, r)?)))
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(letters, relations)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionDoc {
    pub indices: Vec<usize>,
}

impl SolutionDoc {
    pub fn from_solution(sol: &PcpSolution) -> Self {
        SolutionDoc {
            indices: sol.indices().to_vec(),
        }
    }

    pub fn to_solution(&self) -> Result<PcpSolution> {
        PcpSolution::new(self.indices.clone())
    }
}

/// Outcome of the bounded solver.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum SolveOutcomeDoc {
    Solution { indices: Vec<usize> },
    Unsolvable { reason: String },
    Exhausted,
}

impl SolveOutcomeDoc {
    pub fn from_outcome(outcome: &SearchOutcome<PcpSolution>) -> Self {
        match outcome {
            SearchOutcome::Found(sol) => SolveOutcomeDoc::Solution {
                indices: sol.indices().to_vec(),
            },
            SearchOutcome::ProvedUnsolvable(reason) => SolveOutcomeDoc::Unsolvable {
                reason: reason.tag().to_owned(),
            },
            SearchOutcome::Exhausted => SolveOutcomeDoc::Exhausted,
        }
    }
}

fn tags_to_strings(tags: &[GammaTag]) -> Vec<String> {
    tags.iter().map(GammaTag::to_string).collect()
}

fn tags_from_strings(texts: &[String]) -> Result<Vec<GammaTag>> {
    texts.iter().map(|t| GammaTag::from_str(t)).collect()
}

/// A claimed relation between generator products.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationDoc {
    pub p: Vec<String>,
    pub q: Vec<String>,
}

impl RelationDoc {
    pub fn from_relation(rel: &GammaRelation) -> Self {
        RelationDoc {
            p: tags_to_strings(&rel.p),
            q: tags_to_strings(&rel.q),
        }
    }

    pub fn to_relation(&self) -> Result<GammaRelation> {
        Ok(GammaRelation::new(
            tags_from_strings(&self.p)?,
            tags_from_strings(&self.q)?,
        ))
    }
}

/// Outcome of the relation search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum RelationOutcomeDoc {
    Relation { p: Vec<String>, q: Vec<String> },
    Exhausted,
}

impl RelationOutcomeDoc {
    pub fn from_outcome(outcome: &SearchOutcome<GammaRelation>) -> Self {
        match outcome {
            SearchOutcome::Found(rel) => RelationOutcomeDoc::Relation {
                p: tags_to_strings(&rel.p),
                q: tags_to_strings(&rel.q),
            },
            // The relation search never proves freeness, only exhausts.
            _ => RelationOutcomeDoc::Exhausted,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub position: usize,
    pub relation: usize,
}

/// A derivation: its words plus one optional rewrite witness per step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationDoc {
    pub steps: Vec<WordDoc>,
    pub witnesses: Vec<Option<WitnessDoc>>,
}

impl DerivationDoc {
    pub fn from_derivation(d: &Derivation) -> Self {
        DerivationDoc {
            steps: d.steps().iter().map(word_to_doc).collect(),
            witnesses: d
                .witnesses()
                .iter()
                .map(|w| {
                    w.map(|w| WitnessDoc {
                        position: w.position,
                        relation: w.relation,
                    })
                })
                .collect(),
        }
    }

    pub fn to_derivation(&self, letters: &Alphabet) -> Result<Derivation> {
        let steps = self
            .steps
            .iter()
            .map(|s| word_from_doc(letters, s))
            .collect::<Result<Vec<_>>>()?;
        let witnesses = self
            .witnesses
            .iter()
            .map(|w| {
                w.map(|w| RewriteWitness {
                    position: w.position,
                    relation: w.relation,
                })
            })
            .collect();
        Derivation::new(steps, witnesses)
    }
}

/// A 3x3 matrix with decimal-string entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: [[String; 3]; 3],
}

impl MatrixDoc {
    pub fn from_matrix(m: &Mat3) -> Self {
        let row = |r: usize| {
            [
                m.entry(r, 0).to_string(),
                m.entry(r, 1).to_string(),
                m.entry(r, 2).to_string(),
            ]
        };
        MatrixDoc {
            rows: [row(0), row(1), row(2)],
        }
    }

    pub fn to_matrix(&self) -> Result<Mat3> {
        let mut rows: [[Nat; 3]; 3] = Default::default();
        for (r, row) in self.rows.iter().enumerate() {
            for (c, text) in row.iter().enumerate() {
                rows[r][c] = Nat::from_str(text).map_err(|_| Error::BadNumber(text.clone()))?;
            }
        }
        Ok(Mat3::new(rows))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StringPairDoc {
    pub w: String,
    pub j: String,
}

impl StringPairDoc {
    pub fn from_pair(pair: &StringPair) -> Self {
        StringPairDoc {
            w: pair.w().to_string(),
            j: pair.j().to_string(),
        }
    }

    pub fn to_pair(&self) -> Result<StringPair> {
        StringPair::parse(&self.w, &self.j)
    }
}

/// One named generator: its tag, string pair, and matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorDoc {
    pub tag: String,
    pub w: String,
    pub j: String,
    pub matrix: MatrixDoc,
}

impl GeneratorDoc {
    pub fn from_generator(gen: &GammaGenerator) -> Self {
        GeneratorDoc {
            tag: gen.tag().to_string(),
            w: gen.pair().w().to_string(),
            j: gen.pair().j().to_string(),
            matrix: MatrixDoc::from_matrix(&gen.matrix()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaDoc {
    pub generators: Vec<GeneratorDoc>,
}

impl GammaDoc {
    pub fn from_generators(gens: &[GammaGenerator]) -> Self {
        GammaDoc {
            generators: gens.iter().map(GeneratorDoc::from_generator).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDoc {
    pub kind: String,
    pub indices: Vec<usize>,
    pub b: Vec<String>,
    pub c: Vec<String>,
}

/// A factored relation plus the solution its blocks spell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationDoc {
    pub blocks: Vec<BlockDoc>,
    pub solution: SolutionDoc,
}

impl FactorizationDoc {
    pub fn from_factorization(fact: &BlockFactorization) -> Self {
        FactorizationDoc {
            blocks: fact
                .blocks()
                .iter()
                .map(|b| BlockDoc {
                    kind: b.kind.label().to_owned(),
                    indices: b.indices.clone(),
                    b: tags_to_strings(&b.b),
                    c: tags_to_strings(&b.c),
                })
                .collect(),
            solution: SolutionDoc::from_solution(&crate::freeness::extract_pcp_solution(fact)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairMatricesDoc {
    pub u: MatrixDoc,
    pub ubar: MatrixDoc,
    pub v: MatrixDoc,
    pub vbar: MatrixDoc,
}

/// The matrix encoding of a whole instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatricesDoc {
    pub h: usize,
    pub l: MatrixDoc,
    pub pairs: Vec<PairMatricesDoc>,
}

impl MatricesDoc {
    pub fn from_matrices(m: &InstanceMatrices) -> Self {
        let pair_doc = |p: &PairMatrices| PairMatricesDoc {
            u: MatrixDoc::from_matrix(&p.u),
            ubar: MatrixDoc::from_matrix(&p.ubar),
            v: MatrixDoc::from_matrix(&p.v),
            vbar: MatrixDoc::from_matrix(&p.vbar),
        };
        MatricesDoc {
            h: m.params().h(),
            l: MatrixDoc::from_matrix(m.l()),
            pairs: m.per_pair().iter().map(pair_doc).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingFailureDoc {
    pub sequence: Vec<String>,
    pub detail: String,
}

/// Outcome of the randomized embedding check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingReportDoc {
    pub trials: usize,
    pub passed: bool,
    pub failures: Vec<EmbeddingFailureDoc>,
}

impl EmbeddingReportDoc {
    pub fn from_report(report: &EmbeddingReport) -> Self {
        EmbeddingReportDoc {
            trials: report.trials,
            passed: report.passed(),
            failures: report
                .failures
                .iter()
                .map(|f| EmbeddingFailureDoc {
                    sequence: f.sequence.clone(),
                    detail: f.detail.clone(),
                })
                .collect(),
        }
    }
}
