# Generated by nnmig 0.1.0: lstm.py -> pt/subc
# pivot fnv1a64: 0eefa083ccf28360

import torch
import torch.nn as nn
from torch.utils.data import DataLoader, TensorDataset

INPUT_SHAPE = (200,)  # channel-last, batch excluded


class LSTMClassifier(nn.Module):
    def __init__(self):
        super().__init__()
        self.embedding = nn.Embedding(10000, 128)
        self.lstm1 = nn.LSTM(128, 64, batch_first=True)
        self.dropout = nn.Dropout(p=0.3)
        self.lstm2 = nn.LSTM(64, 32, batch_first=True)
        self.dense = nn.Linear(32, 64)
        self.dense_act = nn.ReLU()
        self.classifier = nn.Linear(64, 2)
        self.classifier_act = nn.Softmax(dim=-1)

    def forward(self, x):
        embedding = self.embedding(x)
        lstm1, _ = self.lstm1(embedding)
        dropout = self.dropout(lstm1)
        lstm2 = self.lstm2(dropout)[0][:, -1, :]
        dense = self.dense_act(self.dense(lstm2))
        classifier = self.classifier_act(self.classifier(dense))
        return classifier


METRICS = ('accuracy',)


def make_loader(inputs, targets, shuffle=True):
    return DataLoader(TensorDataset(inputs, targets), batch_size=32, shuffle=shuffle)


def train(model, inputs, targets):
    loader = make_loader(inputs, targets)
    optimizer = torch.optim.Adam(model.parameters(), lr=0.001)
    criterion = nn.CrossEntropyLoss()
    model.train()
    for epoch in range(1):
        for batch_x, batch_y in loader:
            optimizer.zero_grad()
            out = model(batch_x)
            loss = criterion(out, batch_y)
            loss.backward()
            optimizer.step()
    return model


def evaluate(model, inputs, targets):
    loader = make_loader(inputs, targets, shuffle=False)
    criterion = nn.CrossEntropyLoss()
    model.eval()
    total = 0.0
    with torch.no_grad():
        for batch_x, batch_y in loader:
            out = model(batch_x)
            total += criterion(out, batch_y).item()
    return total / max(len(loader), 1)
