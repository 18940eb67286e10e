#pragma once

#include "gcfx/graph.hpp"
#include "gcfx/model.hpp"

namespace gcfx {

/// Symmetric-normalized adjacency with self-loops:
/// A_hat = D~^{-1/2} (A + I) D~^{-1/2}, D~ the degree matrix of A + I.
Mat normalized_adjacency(const Mat& adjacency);

/// H_next = ReLU(A_hat * H_prev * W). No bias.
Mat gnn_layer(const Mat& H_prev, const Mat& a_hat, const Mat& W);

/// Run all layers on one graph; rows are the patch embeddings h_v.
Mat encode(const Graph& g, const ModelParams& params);

/// Batched variant over the block-diagonal adjacency. Bitwise identical to
/// per-graph encoding thanks to the fixed-order matmul kernel.
Mat encode(const GraphBatch& batch, const ModelParams& params);

}  // namespace gcfx
