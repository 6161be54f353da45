#pragma once

#include <string>
#include <string_view>
#include <unordered_map>

#include "fsd/vectors.hpp"

namespace fsd {

/// Looks up the vector of a document by id.
class VectorSource {
 public:
  virtual ~VectorSource() = default;
  virtual const DocVector* find(std::string_view id) const = 0;
  virtual std::string describe() const = 0;
};

class VectorMap final : public VectorSource {
 public:
  explicit VectorMap(std::string description = "in-memory")
      : description_(std::move(description)) {}

  void insert(std::string id, DocVector vector);
  const DocVector* find(std::string_view id) const override;
  std::string describe() const override { return description_; }
  std::size_t size() const { return vectors_.size(); }

 private:
  std::string description_;
  std::unordered_map<std::string, DocVector> vectors_;
};

}  // namespace fsd
