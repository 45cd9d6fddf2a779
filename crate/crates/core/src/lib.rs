//! Proof toolkit for Turing machine computations.
//!
//! The library turns a deterministic Turing machine run into a first-order
//! tableau theory, synthesizes a Hilbert-style proof of the machine's output
//! from that theory, checks such proofs with a small trusted kernel, and
//! replays verified proofs as "adjoint checkers" that recognize which other
//! inputs the same proof still covers. On top of that sits a discovery loop
//! that accumulates checkers until a finite sweep certifies a universal
//! claim about the machine, or finds a counterexample.
//!
//! Modules:
//! - [`formula`]: the first-order language, parser, canonical text form,
//!   string/sequence orders and length accounting.
//! - [`machine`]: machine model, simulation, computation tables, prefix
//!   stability.
//! - [`encoding`]: tableau theories `T<M,s>` and the membership algorithm.
//! - [`kernel`]: the trusted checker (axiom recognition, verification,
//!   proof types, adjoint checkers, key information).
//! - [`synthesis`]: section-based proof construction and proof-length
//!   measures.
//! - [`verifier`]: checker sets, the generated verifier, and the discovery
//!   loop.
//! - [`fixtures`]: small machines used throughout the test suite and CLI.

pub mod encoding;
pub mod fixtures;
pub mod formula;
pub mod kernel;
pub mod machine;
pub mod synthesis;
pub mod verifier;

/// Which axiom schemas the kernel admits.
///
/// `Strict` admits the seven base logical-axiom groups only, so synthesized
/// proofs spell out every instantiation and equality step. `Paper` adds
/// three derived schemas (iterated instantiation, quantified conjunct
/// extraction, projection resolution) which keep proof sections short.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelMode {
    #[default]
    Paper,
    Strict,
}

impl KernelMode {
    pub fn name(self) -> &'static str {
        match self {
            KernelMode::Paper => "paper",
            KernelMode::Strict => "strict",
        }
    }
}

impl std::str::FromStr for KernelMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(KernelMode::Paper),
            "strict" => Ok(KernelMode::Strict),
            other => Err(format!("unknown kernel mode {other:?} (expected paper|strict)")),
        }
    }
}
