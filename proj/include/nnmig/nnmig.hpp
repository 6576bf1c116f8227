// Copyright (C) 2026 The nnmig Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "nnmig/cli.hpp"
#include "nnmig/codegen.hpp"
#include "nnmig/diagnostics.hpp"
#include "nnmig/dialect.hpp"
#include "nnmig/extract.hpp"
#include "nnmig/layout.hpp"
#include "nnmig/naming.hpp"
#include "nnmig/pivot.hpp"
#include "nnmig/pivot_json.hpp"
#include "nnmig/shape.hpp"
#include "nnmig/symbols.hpp"
#include "nnmig/syntax.hpp"
#include "nnmig/version.hpp"
#include "nnmig/vocab.hpp"
