// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace graphrx::kg {

struct Triple {
  int64_t head = 0;
  int64_t relation = 0;
  int64_t tail = 0;
  bool operator==(const Triple&) const = default;
};

enum class Split { train, valid, test };

/// Entity/relation vocabularies plus (h, r, t) facts per split and an
/// all-facts index used for filtered evaluation and sampling. Splits are
/// duplicate-free and pairwise disjoint by construction.
class TripletStore {
public:
  /// Builds vocabularies in first-appearance order over train, valid,
  /// test name triples.
  static TripletStore from_names(const std::vector<std::array<std::string, 3>>& train,
                                 const std::vector<std::array<std::string, 3>>& valid,
                                 const std::vector<std::array<std::string, 3>>& test);

  /// Index-based construction for programmatic stores.
  static TripletStore from_indices(std::vector<std::string> entities,
                                   std::vector<std::string> relations,
                                   std::vector<Triple> train, std::vector<Triple> valid,
                                   std::vector<Triple> test);

  /// Reads train.tsv / valid.tsv / test.tsv (head TAB relation TAB tail).
  static TripletStore load_dir(const std::string& dir);

  int64_t num_entities() const { return int64_t(entities_.size()); }
  int64_t num_relations() const { return int64_t(relations_.size()); }
  const std::vector<std::string>& entities() const { return entities_; }
  const std::vector<std::string>& relations() const { return relations_; }
  const std::string& entity_name(int64_t id) const;
  const std::string& relation_name(int64_t id) const;

  /// Resolves a name; unknown names raise VocabError with the nearest
  /// vocabulary entry as a suggestion.
  int64_t entity_id(const std::string& name) const;
  int64_t relation_id(const std::string& name) const;

  const std::vector<Triple>& split(Split which) const;
  const std::vector<Triple>& train() const { return train_; }
  const std::vector<Triple>& valid() const { return valid_; }
  const std::vector<Triple>& test() const { return test_; }

  bool known_fact(int64_t h, int64_t r, int64_t t) const;

private:
  void index_facts();
  static uint64_t fact_key(int64_t h, int64_t r, int64_t t);

  std::vector<std::string> entities_;
  std::vector<std::string> relations_;
  std::unordered_map<std::string, int64_t> entity_index_;
  std::unordered_map<std::string, int64_t> relation_index_;
  std::vector<Triple> train_, valid_, test_;
  std::unordered_set<uint64_t> facts_;
};

/// Case-sensitive Levenshtein nearest match; ties break lexicographically.
std::string nearest_name(const std::string& query, const std::vector<std::string>& vocabulary);

}  // namespace graphrx::kg
