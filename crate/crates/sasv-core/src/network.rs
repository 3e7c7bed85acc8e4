//! Feed-forward SASV classifiers: a single MLP over concatenated
//! embeddings and the parallel dual-network model whose two branch
//! probabilities are averaged into the final score. Forward and
//! backward passes are exact and allocation-per-call simple; models
//! are small enough that clarity wins over scratch reuse.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::EmbeddingStores;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::scoring::{sigmoid, sigmoid_grad_from_output, Trial};

/// Hidden-layer activation; the output layer is always a sigmoid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Activation<R = crate::Scalar> {
    LeakyRelu(R),
    Relu,
    Tanh,
}

impl<R: Real> Activation<R> {
    pub fn apply(&self, z: R) -> R {
        match *self {
            Activation::LeakyRelu(slope) => {
                if z > R::zero() {
                    z
                } else {
                    slope * z
                }
            }
            Activation::Relu => z.max(R::zero()),
            Activation::Tanh => z.tanh(),
        }
    }

    /// Derivative at pre-activation `z` with post-activation `a`.
    fn grad(&self, z: R, a: R) -> R {
        match *self {
            Activation::LeakyRelu(slope) => {
                if z > R::zero() {
                    R::one()
                } else {
                    slope
                }
            }
            Activation::Relu => {
                if z > R::zero() {
                    R::one()
                } else {
                    R::zero()
                }
            }
            Activation::Tanh => R::one() - a * a,
        }
    }
}

impl<R: Real> fmt::Display for Activation<R> {
    fmt::Display::fmt is not derived; the textual form feeds the checkpoint format.
}
