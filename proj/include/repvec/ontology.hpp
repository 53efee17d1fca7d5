#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "repvec/embeddings.hpp"
#include "repvec/vector_ops.hpp"

namespace repvec {

struct OntologyClass {
    std::string label;
    std::vector<std::string> instances;  // unique after lowercasing, file order
};

struct ResolvedClass {
    std::string label;
    Vector c0;                                // class-name vector
    std::vector<Vector> instance_vectors;     // nonempty
    std::vector<std::string> resolved_instances;
    std::vector<std::string> dropped_instances;
};

/// Reads {"classes":[{"label": ..., "instances": [...]}, ...]}.
/// Instances are deduplicated case-insensitively (first spelling wins).
std::vector<OntologyClass> load_ontology(std::istream& in);
std::vector<OntologyClass> load_ontology_file(const std::string& path);

void save_ontology(std::ostream& out, const std::vector<OntologyClass>& classes);
void save_ontology_file(const std::string& path, const std::vector<OntologyClass>& classes);

/// Embeds the label (C0) and every instance; instances with no known token
/// are moved to dropped_instances.
ResolvedClass resolve_class(const OntologyClass& cls, const EmbeddingTable& table);

}  // namespace repvec
