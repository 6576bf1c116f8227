# Generated by nnmig 0.1.0: pt/subc -> tf/subc
# pivot fnv1a64: 6433cb1a903663f3

import tensorflow as tf
from tensorflow import keras
from tensorflow.keras import layers

INPUT_SHAPE = (100,)  # channel-last, batch excluded


class CNNRNN(keras.Model):
    def __init__(self):
        super().__init__()
        self.embedding = layers.Embedding(10000, 128)
        self.embed_dropout = layers.Dropout(0.2)
        self.conv1 = layers.Conv1D(64, 5, activation='relu')
        self.pool = layers.MaxPooling1D(pool_size=2)
        self.conv2 = layers.Conv1D(64, 3, activation='relu')
        self.flatten = layers.Flatten()
        self.rnn = layers.LSTM(64)
        self.concat = layers.Concatenate(axis=-1)
        self.hidden = layers.Dense(64, activation='relu')
        self.dropout = layers.Dropout(0.5)
        self.out = layers.Dense(1, activation='sigmoid')

    def call(self, x):
        embedding = self.embedding(x)
        embed_dropout = self.embed_dropout(embedding)
        conv1 = self.conv1(embed_dropout)
        pool = self.pool(conv1)
        conv2 = self.conv2(pool)
        flatten = self.flatten(conv2)
        rnn = self.rnn(embed_dropout)
        concat = self.concat([flatten, rnn])
        hidden = self.hidden(concat)
        dropout = self.dropout(hidden)
        out = self.out(dropout)
        return out


def train(model, x_train, y_train):
    model.compile(
        optimizer=keras.optimizers.Adam(learning_rate=0.001),
        loss='binary_crossentropy',
        metrics=['accuracy'],
    )
    model.fit(x_train, y_train, batch_size=32, epochs=10)
    return model


def evaluate(model, x_test, y_test):
    return model.evaluate(x_test, y_test, batch_size=32)


def load_datasets():
    train_ds = keras.utils.text_dataset_from_directory('data/imdb/train')
    return train_ds
