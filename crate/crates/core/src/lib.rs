//! Index codes for single-unicast index coding with symmetric neighbouring
//! interference: `K` receivers on a ring, each wanting its own message and
//! blind to the `U` messages before and the `D` messages after it.
//!
//! * [`air`] builds Adjacent Independent Row matrices and checks their
//!   window properties.
//! * [`suicp`] models a problem instance, searches the feasible `(a, b)`
//!   pairs and computes the broadcast-rate bounds.
//! * [`codec`] encodes and decodes the partitioned vector code and the two
//!   scalar codes.
//! * [`harness`] runs basis round-trip verification and reproduces the
//!   reference tables.
//! * [`galois`] is the prime-field linear algebra underneath.
//!
//! ```
//! use sni_coding::{codec::{IndexCode, MessageVector, PartitionedCode, SideInfo}, galois::PrimeField, suicp::SniProblem};
//!
//! let problem = SniProblem::new(13, 4, 1).unwrap();
//! let code = PartitionedCode::min_rate(problem, PrimeField::GF2).unwrap();
//! assert_eq!(code.code_len(), 26);
//!
//! let msg = MessageVector::basis(PrimeField::GF2, 13, 5, 6);
//! let broadcast = code.encode(&msg).unwrap();
//! let side = SideInfo::for_receiver(&problem, 1, &msg);
//! let (value, trace) = code.decode(&broadcast, 1, 1, &side).unwrap();
//! assert_eq!(value.value(), 1);
//! assert_eq!(trace.code_indices, vec![6, 19]);
//! ```

pub mod air;
pub mod cli;
pub mod codec;
pub mod error;
pub mod galois;
pub mod harness;
pub mod suicp;

pub use error::{Error, Result};
