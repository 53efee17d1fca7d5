#pragma once

#include "repvec/candidates.hpp"
#include "repvec/embeddings.hpp"
#include "repvec/error.hpp"
#include "repvec/evaluation.hpp"
#include "repvec/ontology.hpp"
#include "repvec/pipeline.hpp"
#include "repvec/subclustering.hpp"
#include "repvec/svm.hpp"
#include "repvec/synthetic.hpp"
#include "repvec/vector_ops.hpp"
#include "repvec/weights.hpp"
