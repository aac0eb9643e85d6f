// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#include "graphrx/kg/store.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "graphrx/error.hpp"

namespace graphrx::kg {

namespace {

std::vector<std::array<std::string, 3>> read_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open triple file " + path);
  std::vector<std::array<std::string, 3>> rows;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::array<std::string, 3> row;
    size_t start = 0;
    for (int field = 0; field < 3; ++field) {
      size_t tab = line.find('\t', start);
      if (field < 2 && tab == std::string::npos)
        throw ParseError(path + " line " + std::to_string(line_no) +
                         ": expected head<TAB>relation<TAB>tail");
      row[size_t(field)] = line.substr(start, tab == std::string::npos ? tab : tab - start);
      start = tab + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

TripletStore TripletStore::from_names(const std::vector<std::array<std::string, 3>>& train,
                                      const std::vector<std::array<std::string, 3>>& valid,
                                      const std::vector<std::array<std::string, 3>>& test) {
  TripletStore store;
  auto entity = [&store](const std::string& name) {
    auto [it, added] = store.entity_index_.try_emplace(name, store.num_entities());
    if (added) store.entities_.push_back(name);
    return it->second;
  };
  auto relation = [&store](const std::string& name) {
    auto [it, added] = store.relation_index_.try_emplace(name, store.num_relations());
    if (added) store.relations_.push_back(name);
    return it->second;
  };
  for (auto [rows, out] : {std::pair{&train, &store.train_}, {&valid, &store.valid_},
                           {&test, &store.test_}}) {
    out->reserve(rows->size());
    for (const auto& row : *rows)
      out->push_back(Triple{entity(row[0]), relation(row[1]), entity(row[2])});
  }
  store.index_facts();
  return store;
}

TripletStore TripletStore::from_indices(std::vector<std::string> entities,
                                        std::vector<std::string> relations,
                                        std::vector<Triple> train, std::vector<Triple> valid,
                                        std::vector<Triple> test) {
  TripletStore store;
  store.entities_ = std::move(entities);
  store.relations_ = std::move(relations);
  for (int64_t i = 0; i < store.num_entities(); ++i)
    store.entity_index_[store.entities_[size_t(i)]] = i;
  for (int64_t i = 0; i < store.num_relations(); ++i)
    store.relation_index_[store.relations_[size_t(i)]] = i;
  store.train_ = std::move(train);
  store.valid_ = std::move(valid);
  store.test_ = std::move(test);
  store.index_facts();
  return store;
}

TripletStore TripletStore::load_dir(const std::string& dir) {
  return from_names(read_tsv(dir + "/train.tsv"), read_tsv(dir + "/valid.tsv"),
                    read_tsv(dir + "/test.tsv"));
}

const std::string& TripletStore::entity_name(int64_t id) const {
  if (id < 0 || id >= num_entities()) throw IndexError("entity id out of range");
  return entities_[size_t(id)];
}

const std::string& TripletStore::relation_name(int64_t id) const {
  if (id < 0 || id >= num_relations()) throw IndexError("relation id out of range");
  return relations_[size_t(id)];
}

int64_t TripletStore::entity_id(const std::string& name) const {
  auto it = entity_index_.find(name);
  if (it == entity_index_.end())
    throw VocabError("unknown entity \"" + name + "\"", nearest_name(name, entities_));
  return it->second;
}

int64_t TripletStore::relation_id(const std::string& name) const {
  auto it = relation_index_.find(name);
  if (it == relation_index_.end())
    throw VocabError("unknown relation \"" + name + "\"", nearest_name(name, relations_));
  return it->second;
}

const std::vector<Triple>& TripletStore::split(Split which) const {
  switch (which) {
    case Split::train: return train_;
    case Split::valid: return valid_;
    case Split::test: return test_;
  }
  throw ContractError("bad split");
}

bool TripletStore::known_fact(int64_t h, int64_t r, int64_t t) const {
  return facts_.count(fact_key(h, r, t)) > 0;
}

uint64_t TripletStore::fact_key(int64_t h, int64_t r, int64_t t) {
  // 24 bits per field is ample for desk-scale stores.
  return (uint64_t(h) << 40) | (uint64_t(r) << 20) | uint64_t(t);
}

void TripletStore::index_facts() {
  for (const auto* split : {&train_, &valid_, &test_}) {
    for (const Triple& triple : *split) {
      if (triple.head < 0 || triple.head >= num_entities() || triple.tail < 0 ||
          triple.tail >= num_entities() || triple.relation < 0 ||
          triple.relation >= num_relations())
        throw IndexError("triple index out of vocabulary range");
    }
  }
  auto check_unique = [this](const std::vector<Triple>& split, const char* name) {
    std::unordered_set<uint64_t> seen;
    for (const Triple& t : split) {
      if (!seen.insert(fact_key(t.head, t.relation, t.tail)).second)
        throw SchemaError(std::string("duplicate triple in ") + name + " split");
      if (facts_.count(fact_key(t.head, t.relation, t.tail)))
        throw SchemaError(std::string("split overlap: a ") + name +
                          " triple already appears in another split");
    }
    for (uint64_t key : seen) facts_.insert(key);
  };
  facts_.clear();
  check_unique(train_, "train");
  check_unique(valid_, "valid");
  check_unique(test_, "test");
}

std::string nearest_name(const std::string& query, const std::vector<std::string>& vocabulary) {
  std::string best;
  size_t best_cost = SIZE_MAX;
  for (const std::string& candidate : vocabulary) {
    // Classic two-row Levenshtein.
    std::vector<size_t> prev(candidate.size() + 1), cur(candidate.size() + 1);
    for (size_t j = 0; j <= candidate.size(); ++j) prev[j] = j;
    for (size_t i = 1; i <= query.size(); ++i) {
      cur[0] = i;
      for (size_t j = 1; j <= candidate.size(); ++j) {
        size_t sub = prev[j - 1] + (query[i - 1] == candidate[j - 1] ? 0 : 1);
        cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
      }
      std::swap(prev, cur);
    }
    size_t cost = prev[candidate.size()];
    if (cost < best_cost || (cost == best_cost && candidate < best)) {
      best_cost = cost;
      best = candidate;
    }
  }
  return best;
}

}  // namespace graphrx::kg
