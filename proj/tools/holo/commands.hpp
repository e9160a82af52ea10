#pragma once

#include <string>
#include <vector>

namespace holo::cli {

int cmd_dataset_gen(const std::vector<std::string>& args);
int cmd_train(const std::vector<std::string>& args);
int cmd_optimize(const std::vector<std::string>& args);
int cmd_estimate(const std::vector<std::string>& args);
int cmd_eval(const std::vector<std::string>& args);
int cmd_render(const std::vector<std::string>& args);

}  // namespace holo::cli
