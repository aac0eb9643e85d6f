// GraphRx: graph machine learning core for drug discovery workloads.
// SPDX-License-Identifier: Apache-2.0

#include "graphrx/io/checkpoint.hpp"

#include <bit>
#include <cstdio>
#include <fstream>

#include "graphrx/error.hpp"

namespace graphrx::io {

namespace {

constexpr char kMagic[] = "GRXCKPT1";

void put_le32(std::string& out, uint32_t v) {
  out.push_back(char(v & 0xff));
  out.push_back(char((v >> 8) & 0xff));
  out.push_back(char((v >> 16) & 0xff));
  out.push_back(char((v >> 24) & 0xff));
}

uint32_t get_le32(const unsigned char* p) {
  return uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 | uint32_t(p[3]) << 24;
}

}  // namespace

const Tensor& Checkpoint::tensor(const std::string& name) const {
  for (const auto& [blob_name, blob] : tensors)
    if (blob_name == name) return blob;
  throw CheckpointError("checkpoint has no tensor \"" + name + "\"");
}

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint) {
  nlohmann::json header;
  header["format_version"] = checkpoint.format_version;
  header["model_kind"] = checkpoint.model_kind;
  header["config"] = checkpoint.config;
  header["feature_scheme_version"] = checkpoint.feature_scheme_version;
  header["meta"] = checkpoint.meta;
  header["entities"] = checkpoint.entities;
  header["relations"] = checkpoint.relations;

  nlohmann::json directory = nlohmann::json::array();
  int64_t offset = 0;
  for (const auto& [name, tensor] : checkpoint.tensors) {
    nlohmann::json entry;
    entry["name"] = name;
    entry["shape"] = tensor.shape();
    entry["offset"] = offset;
    entry["bytes"] = tensor.numel() * 4;
    directory.push_back(entry);
    offset += tensor.numel() * 4;
  }
  header["blobs"] = directory;

  std::string payload = kMagic;
  payload += '\n';
  payload += header.dump();
  payload += '\n';
  for (const auto& [name, tensor] : checkpoint.tensors)
    for (float v : tensor.data()) put_le32(payload, std::bit_cast<uint32_t>(v));

  std::string temp = path + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write checkpoint " + temp);
    out.write(payload.data(), long(payload.size()));
    if (!out) throw IoError("short write on checkpoint " + temp);
  }
  if (std::rename(temp.c_str(), path.c_str()) != 0)
    throw IoError("cannot move checkpoint into place at " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path);
  std::string magic;
  if (!std::getline(in, magic) || magic != kMagic)
    throw CheckpointError(path + " is not a graphrx checkpoint");
  std::string header_line;
  if (!std::getline(in, header_line)) throw CheckpointError(path + ": missing header");
  nlohmann::json header = nlohmann::json::parse(header_line, nullptr, false);
  if (header.is_discarded()) throw CheckpointError(path + ": malformed header");

  Checkpoint checkpoint;
  checkpoint.format_version = header.at("format_version");
  if (checkpoint.format_version != kCheckpointFormatVersion)
    throw CheckpointError(path + ": format version " +
                          std::to_string(checkpoint.format_version) + ", expected " +
                          std::to_string(kCheckpointFormatVersion));
  checkpoint.model_kind = header.at("model_kind");
  checkpoint.config = header.at("config");
  checkpoint.feature_scheme_version = header.at("feature_scheme_version");
  checkpoint.meta = header.at("meta");
  checkpoint.entities = header.at("entities").get<std::vector<std::string>>();
  checkpoint.relations = header.at("relations").get<std::vector<std::string>>();

  std::string rest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* bytes = reinterpret_cast<const unsigned char*>(rest.data());
  for (const auto& entry : header.at("blobs")) {
    std::vector<int64_t> shape = entry.at("shape").get<std::vector<int64_t>>();
    int64_t offset = entry.at("offset");
    int64_t nbytes = entry.at("bytes");
    if (shape_numel(shape) * 4 != nbytes)
      throw CheckpointError(path + ": blob \"" + std::string(entry.at("name")) +
                            "\" shape does not match its byte length");
    if (offset < 0 || offset + nbytes > int64_t(rest.size()))
      throw CheckpointError(path + ": blob \"" + std::string(entry.at("name")) +
                            "\" overruns the file");
    std::vector<float> data(static_cast<size_t>(shape_numel(shape)));
    for (size_t i = 0; i < data.size(); ++i)
      data[i] = std::bit_cast<float>(get_le32(bytes + offset + int64_t(i) * 4));
    checkpoint.tensors.emplace_back(entry.at("name"),
                                    Tensor::from_data(std::move(shape), std::move(data)));
  }
  return checkpoint;
}

}  // namespace graphrx::io
