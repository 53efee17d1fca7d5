#include "repvec/ontology.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "json.hpp"

#include "repvec/error.hpp"

namespace repvec {
namespace {

constexpr const char* kModule = "ontology";

using nlohmann::json;

Error parse_error(const std::string& what, std::size_t pos = 0) {
    Error e(ErrorCode::ParseError, kModule, what);
    e.at(pos);
    return e;
}

bool blank(const std::string& s) {
    return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

std::vector<OntologyClass> load_ontology(std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw parse_error(e.what(), e.byte);
    }
    if (!doc.is_object() || !doc.contains("classes") || !doc["classes"].is_array()) {
        throw parse_error("expected an object with a \"classes\" array");
    }

    std::vector<OntologyClass> classes;
    std::unordered_set<std::string> labels;
    for (const auto& entry : doc["classes"]) {
        if (!entry.is_object() || !entry.contains("label") || !entry["label"].is_string()) {
            throw parse_error("class entry without a string \"label\"");
        }
        OntologyClass cls;
        cls.label = entry["label"].get<std::string>();
        if (blank(cls.label)) {
            throw parse_error("class label must be nonempty");
        }
        if (!labels.insert(cls.label).second) {
            throw Error(ErrorCode::DuplicateClassLabel, kModule, "duplicate class label '" + cls.label + "'")
                .with_class(cls.label);
        }
        const auto it = entry.find("instances");
        if (it == entry.end() || !it->is_array()) {
            throw parse_error("class '" + cls.label + "' has no \"instances\" array");
        }
        std::unordered_set<std::string> seen;
        for (const auto& inst : *it) {
            if (!inst.is_string()) {
                throw parse_error("class '" + cls.label + "' has a non-string instance");
            }
            auto s = inst.get<std::string>();
            if (blank(s)) {
                throw parse_error("class '" + cls.label + "' has an empty instance string");
            }
            if (seen.insert(to_lower(s)).second) {
                cls.instances.push_back(std::move(s));
            }
        }
        if (cls.instances.empty()) {
            throw Error(ErrorCode::EmptyClass, kModule, "class '" + cls.label + "' has no instances")
                .with_class(cls.label);
        }
        classes.push_back(std::move(cls));
    }
    return classes;
}

std::vector<OntologyClass> load_ontology_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, kModule, "cannot open '" + path + "'");
    }
    return load_ontology(in);
}

void save_ontology(std::ostream& out, const std::vector<OntologyClass>& classes) {
    json arr = json::array();
    for (const auto& cls : classes) {
        arr.push_back({{"label", cls.label}, {"instances", cls.instances}});
    }
    json doc;
    doc["classes"] = std::move(arr);
    out << doc.dump(2) << '\n';
}

void save_ontology_file(const std::string& path, const std::vector<OntologyClass>& classes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, kModule, "cannot write '" + path + "'");
    }
    save_ontology(out, classes);
}

ResolvedClass resolve_class(const OntologyClass& cls, const EmbeddingTable& table) {
    ResolvedClass out;
    out.label = cls.label;

    auto c0 = try_embed_phrase(table, cls.label);
    if (!c0) {
        throw Error(ErrorCode::LabelUnresolvable, kModule,
                    "class label '" + cls.label + "' has no token in the embedding table")
            .with_class(cls.label);
    }
    out.c0 = std::move(*c0);

    for (const auto& inst : cls.instances) {
        if (auto v = try_embed_phrase(table, inst)) {
            out.instance_vectors.push_back(std::move(*v));
            out.resolved_instances.push_back(inst);
        } else {
            out.dropped_instances.push_back(inst);
        }
    }
    if (out.instance_vectors.empty()) {
        throw Error(ErrorCode::ClassUnresolvable, kModule,
                    "no instance of class '" + cls.label + "' resolves to a vector")
            .with_class(cls.label);
    }
    return out;
}

}  // namespace repvec
